"""Closed-form solutions of the boundary Riemann problem.

Constant initial state (u0, sigma0) on x > 0 and constant boundary velocity
ub at x = 0, all on one level set of the j-th invariant.  In the shifted
velocity v = u - (-1)^{j+1} k the problem is a boundary Riemann problem for
Burgers' equation with data v0bar = u0 - (-1)^{j+1} k inside and
vbbar = ub - (-1)^{j+1} k on the boundary.  Six parameter regimes admit
closed forms (shifted-variable description):

  C1  v0bar = vbbar > 0      constant v0bar, boundary datum attained;
  C2  v0bar = vbbar < 0      constant v0bar, outflow;
  C3  0 < vbbar < v0bar      vbbar near the boundary, fan to v0bar;
  C4  vbbar < 0 < v0bar      fan from 0 at the boundary up to v0bar;
  C5  vbbar < 0, v0bar <= 0  constant v0bar, boundary datum ignored;
  C6  v0bar < vbbar, v0bar + vbbar > 0
                             shock at x = s t, s = (v0bar + vbbar)/2,
                             vbbar behind, v0bar ahead.

Parameter ties not covered by a case (for example v0bar = vbbar = 0, or a
stationary C6 shock v0bar + vbbar = 0) raise UnclassifiedBoundaryCase.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import ModelConstants, State
from .errors import DegenerateTime, UnclassifiedBoundaryCase, WrongCase
from .fields import FieldGrid, Grid

__all__ = [
    "RiemannCase",
    "RiemannData",
    "classify",
    "shock_speed",
    "case_thresholds",
    "on_threshold",
    "riemann_solution",
    "solve_riemann",
]


class RiemannCase(enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"


@dataclass(frozen=True)
class RiemannData:
    """Constant problem data for the boundary Riemann problem."""

    constants: ModelConstants
    u0: float
    ub: float

    def __post_init__(self):
        for name in ("u0", "ub"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")

    @property
    def v0bar(self) -> float:
        return self.u0 - self.constants.shift

    @property
    def vbbar(self) -> float:
        return self.ub - self.constants.shift


def classify(data: RiemannData) -> RiemannCase:
    """Map data to its analytic case; ties between cases are rejected."""
    v0, vb = data.v0bar, data.vbbar
    if v0 == vb:
        if v0 > 0.0:
            return RiemannCase.C1
        if v0 < 0.0:
            return RiemannCase.C2
        raise UnclassifiedBoundaryCase("v0bar = vbbar = 0 sits between cases")
    if 0.0 < vb < v0:
        return RiemannCase.C3
    if vb < 0.0 < v0:
        return RiemannCase.C4
    if vb < 0.0 and v0 <= 0.0:
        return RiemannCase.C5
    if v0 < vb and v0 + vb > 0.0:
        return RiemannCase.C6
    raise UnclassifiedBoundaryCase(
        f"shifted data (v0bar = {v0}, vbbar = {vb}) lie on a case boundary"
    )


def shock_speed(data: RiemannData) -> float:
    """Rankine-Hugoniot speed s = (v0bar + vbbar)/2 of the C6 shock."""
    case = classify(data)
    if case is not RiemannCase.C6:
        raise WrongCase(f"shock speed is defined for C6 only, data are {case.value}")
    return 0.5 * (data.v0bar + data.vbbar)


def case_thresholds(data: RiemannData) -> tuple[float, ...]:
    """Speeds of the solution's kinks/jumps: thresholds sit at x = speed*t."""
    case = classify(data)
    if case is RiemannCase.C3:
        return (data.vbbar, data.v0bar)
    if case is RiemannCase.C4:
        return (0.0, data.v0bar)
    if case is RiemannCase.C6:
        return (shock_speed(data),)
    return ()


def on_threshold(data: RiemannData, x: float, t: float) -> bool:
    """True when x falls exactly on a case threshold at time t."""
    if t <= 0.0:
        raise DegenerateTime(f"thresholds need t > 0, got t = {t}")
    return any(x == speed * t for speed in case_thresholds(data))


def _v_value(case: RiemannCase, v0: float, vb: float, x: float, t: float) -> float:
    if case in (RiemannCase.C1, RiemannCase.C2, RiemannCase.C5):
        return v0
    if case is RiemannCase.C3:
        if x <= vb * t:
            return vb
        if x >= v0 * t:
            return v0
        return x / t
    if case is RiemannCase.C4:
        return x / t if x < v0 * t else v0
    # C6: right-continuous at the jump
    return vb if x < 0.5 * (v0 + vb) * t else v0


def riemann_solution(data: RiemannData, x: float, t: float) -> tuple[State, RiemannCase]:
    """Exact solution at (x, t), t > 0; returns the state and its case."""
    if t <= 0.0:
        raise DegenerateTime(f"riemann solution needs t > 0, got t = {t}")
    if x < 0.0:
        raise ValueError(f"need x >= 0, got {x}")
    case = classify(data)
    v = _v_value(case, data.v0bar, data.vbbar, x, t)
    sh, c = data.constants.shift, data.constants.c
    u = v + sh
    return State(u=u, sigma=sh * u + c), case


def solve_riemann(data: RiemannData, grid: Grid) -> FieldGrid:
    """Sample the closed form on a grid (t > 0 rows).

    Branch labels name the active formula region ("const", "left", "fan",
    "right"); meta["on_threshold"] marks nodes that sit exactly on a kink or
    jump line, where the reported value is the right-continuous one.
    """
    grid.require_positive_time()
    case = classify(data)
    v0, vb = data.v0bar, data.vbbar
    tm, xm = np.meshgrid(grid.t, grid.x, indexing="ij")

    field = FieldGrid.allocate(grid)
    branch = field.branch
    if case in (RiemannCase.C1, RiemannCase.C2, RiemannCase.C5):
        v = np.full(grid.shape, v0)
        branch[:] = "const"
    elif case is RiemannCase.C3:
        v = np.clip(xm / tm, vb, v0)
        branch[:] = "fan"
        branch[xm <= vb * tm] = "left"
        branch[xm >= v0 * tm] = "right"
    elif case is RiemannCase.C4:
        v = np.minimum(xm / tm, v0)
        branch[:] = "fan"
        branch[xm >= v0 * tm] = "right"
    else:
        s = 0.5 * (v0 + vb)
        v = np.where(xm < s * tm, vb, v0)
        branch[:] = "left"
        branch[xm >= s * tm] = "right"

    sh, c = data.constants.shift, data.constants.c
    field.u = v + sh
    field.sigma = sh * field.u + c
    field.fill_invariants(data.constants.k)
    field.case[:] = case.value
    mark = np.zeros(grid.shape, dtype=bool)
    for speed in case_thresholds(data):
        mark |= xm == speed * tm
    field.meta["on_threshold"] = mark
    return field
