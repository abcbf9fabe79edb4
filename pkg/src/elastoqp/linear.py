"""Explicit solutions of the linearized quarter-plane problem.

Linearizing the system about a constant state with velocity ubar freezes the
characteristic speeds at mu1 = ubar + k (transporting w1 = sigma - k u) and
mu2 = ubar - k (transporting w2 = sigma + k u).  The number of boundary
conditions the quarter plane admits equals the number of positive speeds:

  Case 1: ubar + k < 0          no boundary condition, pure advection;
  Case 2: ubar - k < 0 < ubar + k  one condition alpha u + beta sigma = gamma;
  Case 3: ubar - k > 0          two independent conditions.

Each solver evaluates the exact advection formula: an invariant at (x, t)
comes from the initial data at x - mu t when x >= mu t, otherwise from its
boundary trace at time t - x / mu.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PiecewiseFn
from .errors import (
    DegenerateCombo,
    MissingBoundaryData,
    SingularBoundaryMatrix,
    WrongCase,
)
from .fields import FieldGrid, Grid

__all__ = [
    "BoundaryCombo",
    "BoundaryComboPair",
    "LinearProblem",
    "sign_case",
    "solve_case1",
    "solve_case2",
    "solve_case3",
    "solve_linear",
]


@dataclass(frozen=True)
class BoundaryCombo:
    """One linear boundary condition alpha u(0,t) + beta sigma(0,t) = gamma(t)."""

    alpha: float
    beta: float
    gamma: PiecewiseFn

    def __post_init__(self):
        if self.alpha == 0.0 and self.beta == 0.0:
            raise DegenerateCombo("alpha and beta cannot both vanish")


@dataclass(frozen=True)
class BoundaryComboPair:
    """Two boundary conditions; their coefficient matrix must be invertible."""

    first: BoundaryCombo
    second: BoundaryCombo

    def __post_init__(self):
        if self.det == 0.0:
            raise SingularBoundaryMatrix(
                "boundary conditions are linearly dependent"
            )

    @property
    def det(self) -> float:
        return (
            self.first.alpha * self.second.beta
            - self.first.beta * self.second.alpha
        )

    @classmethod
    def dirichlet(cls, gamma_u: PiecewiseFn, gamma_sigma: PiecewiseFn) -> "BoundaryComboPair":
        """Prescribe u(0,t) = gamma_u and sigma(0,t) = gamma_sigma."""
        return cls(
            BoundaryCombo(1.0, 0.0, gamma_u),
            BoundaryCombo(0.0, 1.0, gamma_sigma),
        )


def sign_case(ubar: float, k: float) -> int:
    """Classify the linearization: 1, 2, or 3; WrongCase on sonic data."""
    if k <= 0.0:
        raise ValueError(f"k must be positive, got {k}")
    if ubar + k < 0.0:
        return 1
    if ubar + k > 0.0 > ubar - k:
        return 2
    if ubar - k > 0.0:
        return 3
    raise WrongCase(f"sonic linearization (ubar = {ubar}, k = {k}) not covered")


@dataclass(frozen=True)
class LinearProblem:
    """Frozen-coefficient problem data.

    w10, w20 are the initial invariant profiles; `boundary` must match the
    sign case (None / single combo / combo pair for cases 1 / 2 / 3).
    """

    ubar: float
    k: float
    w10: PiecewiseFn
    w20: PiecewiseFn
    boundary: BoundaryCombo | BoundaryComboPair | None = None

    def __post_init__(self):
        case = sign_case(self.ubar, self.k)
        if case == 1 and self.boundary is not None:
            raise WrongCase("case 1 admits no boundary condition")
        if case == 2:
            if self.boundary is None:
                raise MissingBoundaryData("case 2 needs one boundary condition")
            if not isinstance(self.boundary, BoundaryCombo):
                raise WrongCase("case 2 takes a single BoundaryCombo")
            if self.k * self.boundary.beta - self.boundary.alpha == 0.0:
                raise DegenerateCombo(
                    "condition cannot determine the incoming invariant"
                    " (k * beta - alpha = 0)"
                )
        if case == 3:
            if self.boundary is None:
                raise MissingBoundaryData("case 3 needs two boundary conditions")
            if not isinstance(self.boundary, BoundaryComboPair):
                raise WrongCase("case 3 takes a BoundaryComboPair")

    @property
    def case(self) -> int:
        return sign_case(self.ubar, self.k)

    @classmethod
    def from_primitive(cls, ubar: float, k: float, u0: PiecewiseFn,
                       sigma0: PiecewiseFn, boundary=None) -> "LinearProblem":
        """Build from (u0, sigma0) instead of invariant profiles."""
        w10 = PiecewiseFn.combine(1.0, sigma0, -k, u0)
        w20 = PiecewiseFn.combine(1.0, sigma0, k, u0)
        return cls(ubar, k, w10, w20, boundary)


def _case2_trace_many(p: LinearProblem, ts: np.ndarray) -> np.ndarray:
    """Incoming-invariant trace w1(0, t) implied by the single condition.

    Substituting u = (w2 - w1)/(2k), sigma = (w1 + w2)/2 into
    alpha u + beta sigma = gamma and solving for w1 gives
        w1 (k beta - alpha) + w2 (k beta + alpha) = 2 k gamma,
    with w2(0, t) = w20((k - ubar) t) carried in from the initial data.
    """
    bc = p.boundary
    k = p.k
    w2_at_0 = p.w20.eval_many((k - p.ubar) * ts)
    num = 2.0 * k * bc.gamma.eval_many(ts) - (k * bc.beta + bc.alpha) * w2_at_0
    return num / (k * bc.beta - bc.alpha)


def _case3_trace_many(p: LinearProblem, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Traces (w1(0,t), w2(0,t)) from the 2x2 boundary solve."""
    pair = p.boundary
    a1, b1 = pair.first.alpha, pair.first.beta
    a2, b2 = pair.second.alpha, pair.second.beta
    g1 = pair.first.gamma.eval_many(ts)
    g2 = pair.second.gamma.eval_many(ts)
    det = pair.det
    u_tr = (g1 * b2 - b1 * g2) / det
    s_tr = (a1 * g2 - g1 * a2) / det
    return s_tr - p.k * u_tr, s_tr + p.k * u_tr


def _advect_many(init: PiecewiseFn, trace_many, mu: float,
                 x: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Evaluate a single advected invariant on meshgrid arrays x, t."""
    out = np.empty(np.broadcast(x, t).shape)
    from_init = x >= mu * t
    out[from_init] = init.eval_many(x[from_init] - mu * t[from_init])
    if not np.all(from_init):
        if trace_many is None:
            raise MissingBoundaryData("boundary trace needed but unavailable")
        rest = ~from_init
        out[rest] = trace_many(t[rest] - x[rest] / mu)
    return out


def solve_case1(p: LinearProblem, x: float, t: float) -> tuple[float, float]:
    """Both speeds negative: pure advection from the initial data."""
    if p.case != 1:
        raise WrongCase(f"problem is case {p.case}, not 1")
    return _point(p, x, t, None, None)


def solve_case2(p: LinearProblem, x: float, t: float) -> tuple[float, float]:
    """One incoming invariant, recovered from the boundary condition."""
    if p.case != 2:
        raise WrongCase(f"problem is case {p.case}, not 2")
    return _point(p, x, t, lambda ts: _case2_trace_many(p, ts), None)


def solve_case3(p: LinearProblem, x: float, t: float) -> tuple[float, float]:
    """Both invariants incoming, recovered from the 2x2 boundary solve."""
    if p.case != 3:
        raise WrongCase(f"problem is case {p.case}, not 3")

    def tr1(ts):
        return _case3_trace_many(p, ts)[0]

    def tr2(ts):
        return _case3_trace_many(p, ts)[1]

    return _point(p, x, t, tr1, tr2)


def _point(p, x, t, trace1, trace2):
    if x < 0.0 or t < 0.0:
        raise ValueError("need x >= 0 and t >= 0")
    xa = np.asarray([float(x)])
    ta = np.asarray([float(t)])
    w1 = _advect_many(p.w10, trace1, p.ubar + p.k, xa, ta)
    w2 = _advect_many(p.w20, trace2, p.ubar - p.k, xa, ta)
    return float(w1[0]), float(w2[0])


def solve_linear(p: LinearProblem, grid: Grid) -> FieldGrid:
    """Sample the exact linearized solution on a grid.

    Branch labels: "init" when both invariants come from the initial data,
    "bdry" when both come from the boundary, "mixed" otherwise.
    """
    case = p.case
    tm, xm = np.meshgrid(grid.t, grid.x, indexing="ij")
    trace1 = trace2 = None
    if case == 2:
        trace1 = lambda ts: _case2_trace_many(p, ts)
    elif case == 3:
        trace1 = lambda ts: _case3_trace_many(p, ts)[0]
        trace2 = lambda ts: _case3_trace_many(p, ts)[1]
    mu1, mu2 = p.ubar + p.k, p.ubar - p.k
    w1 = _advect_many(p.w10, trace1, mu1, xm, tm)
    w2 = _advect_many(p.w20, trace2, mu2, xm, tm)

    out = FieldGrid.allocate(grid)
    out.w1, out.w2 = w1, w2
    out.u = (w2 - w1) / (2.0 * p.k)
    out.sigma = 0.5 * (w1 + w2)
    out.case[:] = f"L{case}"
    w1_bdry = xm < mu1 * tm
    w2_bdry = xm < mu2 * tm
    out.branch[:] = "init"
    out.branch[w1_bdry | w2_bdry] = "mixed"
    out.branch[w1_bdry & w2_bdry] = "bdry"
    return out
