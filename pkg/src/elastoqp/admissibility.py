"""Boundary admissibility and entropy checks for computed fields.

In the shifted velocity v = u - (-1)^{j+1} k the admissible boundary set of
Bardos-LeRoux-Nedelec for Burgers' equation with boundary datum vb is

    E(vb) = {vb} union (-inf, -vb)   when vb > 0,
    E(vb) = (-inf, 0]                when vb <= 0,

equivalently (LeFloch form): the trace v satisfies v = (vb)^+, or v <= 0
with v^2 >= ((vb)^+)^2.  Up to the closure of the open ray the two sets
coincide; both checkers accept traces within `tol` of the admissible set.

When the trace is read off a discrete field at the first interior column
x1 > 0, the Oleinik (fan) spreading bound makes x1/t the natural slack: an
exact solution can change by at most x1/t between 0+ and x1 without any
admissibility violation at the boundary itself, and a shock transiting the
strip (0, x1) stays within that envelope as well.

check_entropy enforces the one-sided Oleinik condition rowwise: adjacent
increments must satisfy v(x+dx) - v(x) <= dx/t + tol.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ModelConstants, ProblemSpec
from .errors import EmptyGrid
from .fields import FieldGrid

__all__ = [
    "Violation",
    "AdmissibilityReport",
    "EntropyReport",
    "bln_set_contains",
    "bln_admissible",
    "lefloch_admissible",
    "check_boundary_admissibility",
    "check_entropy",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Violation:
    """One flagged node: location, check that fired, and the values seen."""

    kind: str
    t: float
    x: float
    value: float
    datum: float
    detail: str = ""


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    violations: tuple[Violation, ...]
    rows_checked: int
    trace_column: int


@dataclass(frozen=True)
class EntropyReport:
    ok: bool
    violations: tuple[Violation, ...]
    rows_checked: int


def bln_set_contains(v_trace: float, vb: float, tol: float = DEFAULT_TOL) -> bool:
    """Membership of a shifted trace in the BLN set E(vb), within tol.

    E(vb) = {vb} union (-inf, -vb) when vb > 0, and (-inf, 0] otherwise.
    """
    if vb > 0.0:
        return abs(v_trace - vb) <= tol or v_trace <= -vb + tol
    return v_trace <= tol


def bln_admissible(u_trace: float, ub_value: float,
                   constants: ModelConstants, tol: float = DEFAULT_TOL) -> bool:
    """bln_set_contains in the original variables (shift both by the level)."""
    return bln_set_contains(u_trace - constants.shift,
                            ub_value - constants.shift, tol)


def lefloch_admissible(u_trace: float, ub_value: float,
                       constants: ModelConstants, tol: float = DEFAULT_TOL) -> bool:
    """Two-branch trace condition: v = (vb)^+, or v <= 0 and v^2 >= ((vb)^+)^2.

    Evaluated in shifted variables; the square comparison is done in the
    equivalent linear form v <= -((vb)^+) to keep the tolerance uniform.
    """
    v = u_trace - constants.shift
    vbp = max(ub_value - constants.shift, 0.0)
    if abs(v - vbp) <= tol:
        return True
    return v <= tol and v <= -vbp + tol


def _trace_column(field: FieldGrid) -> int:
    xs = field.grid.x
    idx = np.flatnonzero(xs > 0.0)
    if idx.size == 0:
        raise EmptyGrid("field has no column with x > 0 to read a trace from")
    return int(idx[0])


def check_boundary_admissibility(field: FieldGrid, spec: ProblemSpec,
                                 tol: float | None = None) -> AdmissibilityReport:
    """Run both trace checkers on every row of a field.

    The trace is read at the first column with x > 0.  With tol = None the
    slack is x1/t + 1e-9 per row (Oleinik envelope for a trace read one cell
    away from the boundary); pass an explicit tol to override.
    """
    col = _trace_column(field)
    x1 = float(field.grid.x[col])
    ub_fn = spec.require_boundary()
    violations: list[Violation] = []
    for r, t in enumerate(field.grid.t):
        if t <= 0.0:
            continue
        slack = (x1 / t + DEFAULT_TOL) if tol is None else tol
        u_tr = float(field.u[r, col])
        ub_t = float(ub_fn(float(t)))
        for name, fn in (("bln", bln_admissible), ("lefloch", lefloch_admissible)):
            if not fn(u_tr, ub_t, spec.constants, tol=slack):
                violations.append(Violation(
                    kind=name, t=float(t), x=x1, value=u_tr, datum=ub_t,
                    detail=f"trace {u_tr:.6g} vs datum {ub_t:.6g}, slack {slack:.3g}",
                ))
    return AdmissibilityReport(
        ok=not violations,
        violations=tuple(violations),
        rows_checked=int(field.grid.t.size),
        trace_column=col,
    )


def check_entropy(field: FieldGrid, spec: ProblemSpec,
                  tol: float = DEFAULT_TOL) -> EntropyReport:
    """Oleinik one-sided bound on adjacent increments of the shifted field.

    For each row with t > 0 and each adjacent column pair, flags
    v(x+dx) - v(x) > dx/t + tol.  Downward jumps (shocks) are always
    admissible for this check; fans saturate the bound exactly.
    """
    xs = field.grid.x
    dxs = np.diff(xs)
    sh = spec.constants.shift
    violations: list[Violation] = []
    rows = 0
    for r, t in enumerate(field.grid.t):
        if t <= 0.0:
            continue
        rows += 1
        v = field.u[r] - sh
        inc = np.diff(v)
        allowed = dxs / t + tol
        bad = np.flatnonzero(inc > allowed)
        for i in bad:
            violations.append(Violation(
                kind="entropy", t=float(t), x=float(xs[i]),
                value=float(inc[i]), datum=float(dxs[i] / t),
                detail=f"increment {inc[i]:.6g} exceeds dx/t = {dxs[i] / t:.6g}",
            ))
    return EntropyReport(
        ok=not violations,
        violations=tuple(violations),
        rows_checked=rows,
    )
