"""Exact quarter-plane solutions by path minimization.

On a level set of the j-th invariant the system collapses to Burgers'
equation v_t + v v_x = 0 for v = u - (-1)^{j+1} k, posed on x > 0 with
initial shifted velocity v0 and boundary shifted velocity vb.  Its entropy
solution is v = dU/dx where

    U(x,t) = min_y [ min(A, B)(x, y, t) + U0(y) ],     U0(y) = int_0^y v0,

A(x,y,t) = (x-y)^2 / (2t) is the free-path cost and B the best cost among
paths that enter the boundary at time tau1 (coming from y; tau1 = 0 forces
y = 0), stay on it, and leave at tau2:

    B = min_{0 <= tau1 <= tau2 < t}  y^2/(2 tau1) - int_{tau1}^{tau2} q(s) ds
        + x^2/(2 (t - tau2)),        q(s) = ((vb(s))^+)^2 / 2.

The slope of the winning path at (x, t) is p = (x - y)/t for interior paths
and p = x/(t - tau2) for boundary paths; then u = p + (-1)^{j+1} k and
sigma follows from the level-set relation.

The minimization exploits structure instead of brute force: U0 is piecewise
quadratic, so every y-minimization is solved exactly piece by piece, and the
boundary branch is separable,

    B + U0 = [Q(tau1) + G(tau1)] + [-Q(tau2) + x^2/(2(t - tau2))],

with Q(s) = int_0^s q and G(tau) = min_y [y^2/(2 tau) + U0(y)] independent
of (x, t).  Each factor is scanned on an n_tau grid (a running minimum
enforces tau1 <= tau2) and refined by golden section; a diagonal pass covers
the constraint-active case tau1 = tau2, on which Q cancels identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import ProblemSpec, State
from .errors import DegenerateTime, HorizonTooSmall, InvalidPath
from .fields import FieldGrid, Grid
from .kernels import pykernels as pk

__all__ = [
    "PathCostParams",
    "MinimizerResult",
    "VariationalTables",
    "interior_cost",
    "u0_potential",
    "boundary_integrand",
    "boundary_path_cost",
    "boundary_cost",
    "value_function",
    "exact_solution",
    "solve_variational",
    "build_tables",
]

@dataclass(frozen=True)
class PathCostParams:
    """Tuning knobs for the path minimization.

    quad_points: midpoint panels per affine boundary piece when tabulating Q;
    n_tau: scan resolution for the (tau1, tau2) search;
    search_tol: golden-section bracket width and branch-tie tolerance;
    y_max: fixed search horizon for y, or None for the per-node default
    x + (2 max|v0| + 2 max|vb| + 1) t.
    """

    quad_points: int = 256
    n_tau: int = 256
    search_tol: float = 1e-9
    y_max: float | None = None

    def __post_init__(self):
        if self.quad_points < 8:
            raise ValueError("quad_points must be >= 8")
        if self.n_tau < 16:
            raise ValueError("n_tau must be >= 16")
        if not self.search_tol > 0.0:
            raise ValueError("search_tol must be positive")
        if self.y_max is not None and not self.y_max > 0.0:
            raise ValueError("y_max must be positive when given")


@dataclass(frozen=True)
class MinimizerResult:
    """Outcome of the value-function minimization at one node.

    branch is "interior", "boundary", or "tie" (|A - B| within search_tol;
    the interior evaluation is reported).  tau1/tau2 are None on interior
    nodes; y is the winning path's starting point on the x axis.
    """

    value: float
    p: float
    branch: str
    y: float
    tau1: float | None
    tau2: float | None
    interior_value: float
    boundary_value: float


@dataclass(frozen=True)
class VariationalTables:
    """Precomputed lookup tables driving the kernels.

    Initial side: piece starts yb, shifted values a, slopes s, and exact
    cumulative potential P = U0(yb).  Boundary side: panel starts sq, panel
    integrand values qs, and cumulative integral Qv = Q(sq); Q is evaluated
    by linear extrapolation of the last panel past t_built.
    """

    yb: np.ndarray
    a: np.ndarray
    s: np.ndarray
    P: np.ndarray
    sq: np.ndarray
    qs: np.ndarray
    Qv: np.ndarray
    growth: float
    t_built: float


def interior_cost(x: float, y: float, t: float) -> float:
    """Free-path cost A(x, y, t) = (x - y)^2 / (2t)."""
    if t <= 0.0:
        raise DegenerateTime(f"interior cost needs t > 0, got t = {t}")
    if x < 0.0 or y < 0.0:
        raise ValueError("need x >= 0 and y >= 0")
    return (x - y) ** 2 / (2.0 * t)


def u0_potential(spec: ProblemSpec, y: float) -> float:
    """Exact initial potential U0(y) = int_0^y (u0(s) - (-1)^{j+1} k) ds."""
    return spec.u0.integral(y) - spec.constants.shift * y


def boundary_integrand(spec: ProblemSpec, s: float) -> float:
    """((vb(s))^+)^2; half of this is the boundary stay's cost rate in J."""
    vb = spec.shifted_boundary()(s)
    return max(vb, 0.0) ** 2


def _initial_arrays(spec: ProblemSpec):
    v0 = spec.shifted_initial()
    yb = np.asarray(v0.breakpoints)
    a = np.asarray(v0.values)
    s = np.asarray(v0.slopes)
    P = np.zeros_like(yb)
    for i in range(yb.size - 1):
        h = yb[i + 1] - yb[i]
        P[i + 1] = P[i] + a[i] * h + 0.5 * s[i] * h * h
    return yb, a, s, P


def _boundary_arrays(spec: ProblemSpec, t_hi: float, quad_points: int):
    """Tabulate Q(s) = int_0^s ((vb)^+)^2/2 with midpoint panels.

    Constant pieces get one exact panel.  Affine pieces are split at their
    zero crossing (so the positive-part kink never sits inside a panel) and
    covered by quad_points midpoint panels each.
    """
    vb = spec.shifted_boundary()
    starts: list[float] = []
    rates: list[float] = []

    def push(lo: float, hi: float, value_at, slope: float):
        if hi <= lo:
            return
        if slope == 0.0:
            starts.append(lo)
            rates.append(0.5 * max(value_at(lo), 0.0) ** 2)
            return
        cuts = list(np.linspace(lo, hi, quad_points + 1))
        zero = lo + (0.0 - value_at(lo)) / slope
        if lo < zero < hi:
            cuts = sorted(set(cuts) | {zero})
        for c0, c1 in zip(cuts, cuts[1:]):
            starts.append(c0)
            rates.append(0.5 * max(value_at(0.5 * (c0 + c1)), 0.0) ** 2)

    bps = list(vb.breakpoints)
    for i, b in enumerate(bps):
        e = bps[i + 1] if i + 1 < len(bps) else t_hi
        lo, hi = b, min(e, t_hi)
        sl = vb.slopes[i]
        push(lo, hi, vb, sl)
        if lo >= t_hi:
            break
    # closing panel: carries the rate at t_hi for evaluation past the table
    starts.append(t_hi)
    rates.append(0.5 * max(vb(t_hi), 0.0) ** 2)

    sq = np.asarray(starts)
    qs = np.asarray(rates)
    Qv = np.zeros_like(sq)
    Qv[1:] = np.cumsum(qs[:-1] * np.diff(sq))
    return sq, qs, Qv


def _growth_constant(spec: ProblemSpec, x_hi: float, t_hi: float) -> float:
    """2 max|v0| + 2 max|vb| + 1, bootstrapped over the reachable y range."""
    v0 = spec.shifted_initial()
    mvb = spec.shifted_boundary().max_abs_on(0.0, t_hi)
    ycap = x_hi + 1.0
    mv0 = 0.0
    for _ in range(2):
        mv0 = v0.max_abs_on(0.0, ycap)
        ycap = x_hi + (2.0 * mv0 + 2.0 * mvb + 1.0) * t_hi
    mv0 = v0.max_abs_on(0.0, max(ycap, x_hi + 1.0))
    return 2.0 * mv0 + 2.0 * mvb + 1.0


def build_tables(spec: ProblemSpec, params: PathCostParams,
                 x_hi: float, t_hi: float) -> VariationalTables:
    """Assemble kernel tables covering queries with x <= x_hi, t <= t_hi."""
    t_built = t_hi + 1.0
    yb, a, s, P = _initial_arrays(spec)
    sq, qs, Qv = _boundary_arrays(spec, t_built, params.quad_points)
    growth = _growth_constant(spec, x_hi, t_hi)
    return VariationalTables(yb, a, s, P, sq, qs, Qv, growth, t_built)


def _q_of(tables: VariationalTables, tau: np.ndarray) -> np.ndarray:
    return pk.q_eval(tau, tables.sq, tables.qs, tables.Qv)


def boundary_path_cost(spec: ProblemSpec, x: float, y: float, t: float,
                       tau1: float, tau2: float,
                       params: PathCostParams | None = None) -> float:
    """Cost J of one boundary path (y, tau1, tau2) to (x, t), without U0.

    Requires 0 <= tau1 <= tau2 < t; tau1 = 0 is only allowed with y = 0
    (the path starts at the corner).
    """
    params = params or PathCostParams()
    if x < 0.0 or y < 0.0:
        raise InvalidPath("need x >= 0 and y >= 0")
    if t <= 0.0:
        raise DegenerateTime(f"boundary path needs t > 0, got t = {t}")
    if not (0.0 <= tau1 <= tau2 < t):
        raise InvalidPath(
            f"times must satisfy 0 <= tau1 <= tau2 < t, got "
            f"tau1 = {tau1}, tau2 = {tau2}, t = {t}"
        )
    if tau1 == 0.0 and y != 0.0:
        raise InvalidPath("tau1 = 0 requires y = 0")
    tables = build_tables(spec, params, x, max(t, tau2))
    stay = float(_q_of(tables, np.asarray(tau2)) - _q_of(tables, np.asarray(tau1)))
    inflow = y * y / (2.0 * tau1) if tau1 > 0.0 else 0.0
    outflow = x * x / (2.0 * (t - tau2))
    return -stay + inflow + outflow


def boundary_cost(spec: ProblemSpec, x: float, y: float, t: float,
                  params: PathCostParams | None = None):
    """B(x, y, t): best boundary-path cost for a fixed start point y.

    Returns (value, tau1, tau2).  Same separable scan as the full value
    function, with the inflow factor y^2/(2 tau1) in place of G.
    """
    params = params or PathCostParams()
    if x < 0.0 or y < 0.0:
        raise InvalidPath("need x >= 0 and y >= 0")
    if t <= 0.0:
        raise DegenerateTime(f"boundary cost needs t > 0, got t = {t}")
    tables = build_tables(spec, params, x, t)
    th = t * (1.0 - 1e-12)
    taus = np.linspace(0.0, th, params.n_tau)
    q_grid = _q_of(tables, taus)

    def f1(tau):
        tau = np.asarray(tau, dtype=float)
        base = _q_of(tables, tau)
        if y > 0.0:
            with np.errstate(divide="ignore"):
                base = base + np.where(tau > 0.0, y * y / (2.0 * tau), np.inf)
        return base

    def f2(tau):
        return -_q_of(tables, tau) + x * x / (2.0 * (t - tau))

    F1 = f1(taus)
    F2 = -q_grid + x * x / (2.0 * (t - taus)) if x > 0.0 else -q_grid
    rm = np.minimum.accumulate(F1)
    prev = np.concatenate(([np.inf], rm[:-1]))
    idx = np.arange(taus.size)
    rmi = np.maximum.accumulate(np.where(F1 < prev, idx, 0))
    tot = rm + F2
    j = int(np.argmin(tot))
    i1 = int(rmi[j])
    best = float(tot[j])
    bt1, bt2 = float(taus[i1]), float(taus[j])

    tol = params.search_tol
    lo1, hi1 = taus[max(i1 - 1, 0)], taus[min(i1 + 1, taus.size - 1)]
    v1, t1 = pk.golden_vec(f1, np.asarray([lo1]), np.asarray([hi1]), tol)
    lo2, hi2 = taus[max(j - 1, 0)], taus[min(j + 1, taus.size - 1)]
    v2, t2 = pk.golden_vec(f2, np.asarray([lo2]), np.asarray([hi2]), tol)
    v1, t1, v2, t2 = float(v1[0]), float(t1[0]), float(v2[0]), float(t2[0])
    if lo1 == 0.0 and y == 0.0 and v1 >= 0.0:
        v1, t1 = 0.0, 0.0
    f20 = float(f2(np.asarray(0.0)))
    if lo2 == 0.0 and f20 <= v2:
        v2, t2 = f20, 0.0
    if t1 <= t2 and v1 + v2 < best:
        best, bt1, bt2 = v1 + v2, t1, t2

    lod = taus[max(min(i1, j) - 1, 0)]
    hid = taus[min(j + 1, taus.size - 1)]
    vd, td = pk.golden_vec(
        lambda tau: f1(tau) + f2(tau),
        np.asarray([lod]), np.asarray([hid]), tol,
    )
    if float(vd[0]) < best:
        best, bt1, bt2 = float(vd[0]), float(td[0]), float(td[0])
    if y == 0.0 and bt1 <= tol:
        bt1 = 0.0
    return best, bt1, bt2


def _minimize_grid(spec: ProblemSpec, tables: VariationalTables,
                   xs: np.ndarray, ts: np.ndarray, params: PathCostParams):
    """Run the kernel and post-process branches; returns a dict of arrays."""
    y_override = -1.0 if params.y_max is None else params.y_max
    iv, iy, bv, by, bt1, bt2, bp = kernels.minimize_grid(
        xs, ts, tables.yb, tables.a, tables.s, tables.P,
        tables.sq, tables.qs, tables.Qv,
        tables.growth, y_override, params.n_tau, params.search_tol,
    )
    tol = params.search_tol
    boundary_wins = bv < iv - tol
    tie = np.abs(iv - bv) <= tol
    value = np.where(boundary_wins, bv, iv)
    tm = ts[:, None]
    p = np.where(boundary_wins, bp, (xs[None, :] - iy) / tm)
    y = np.where(boundary_wins, by, iy)
    if xs[0] == 0.0:
        vb = spec.shifted_boundary()
        col0 = np.maximum(vb.eval_many(ts), 0.0)
        p[:, 0] = np.where(boundary_wins[:, 0], col0, p[:, 0])

    # horizon guard: the winning minimizer must sit strictly inside [0, y_max]
    if params.y_max is None:
        ymax_node = xs[None, :] + tables.growth * tm
        ymax_shared = xs[-1] + tables.growth * tm
    else:
        ymax_node = np.full((ts.size, xs.size), params.y_max)
        ymax_shared = np.full((ts.size, 1), params.y_max)
    limit = np.where(boundary_wins, ymax_shared - tol, ymax_node - tol)
    hit = y >= limit
    if np.any(hit):
        r, c = np.argwhere(hit)[0]
        raise HorizonTooSmall(
            f"minimizer at y = {y[r, c]:.6g} reached the search horizon at "
            f"(x, t) = ({xs[c]:.6g}, {ts[r]:.6g}); increase y_max"
        )
    return {
        "value": value, "p": p, "y": y,
        "tau1": np.where(boundary_wins, bt1, np.nan),
        "tau2": np.where(boundary_wins, bt2, np.nan),
        "interior": iv, "boundary": bv,
        "boundary_wins": boundary_wins, "tie": tie,
    }


def value_function(spec: ProblemSpec, x: float, t: float,
                   params: PathCostParams | None = None) -> MinimizerResult:
    """Minimize min(A, B) + U0 at a single node; see the module docstring."""
    params = params or PathCostParams()
    if t <= 0.0:
        raise DegenerateTime(f"value function needs t > 0, got t = {t}")
    if x < 0.0:
        raise ValueError(f"need x >= 0, got {x}")
    tables = build_tables(spec, params, x, t)
    out = _minimize_grid(spec, tables, np.asarray([float(x)]),
                         np.asarray([float(t)]), params)
    boundary_wins = bool(out["boundary_wins"][0, 0]) and not bool(out["tie"][0, 0])
    branch = "boundary" if boundary_wins else (
        "tie" if bool(out["tie"][0, 0]) else "interior")
    return MinimizerResult(
        value=float(out["value"][0, 0]),
        p=float(out["p"][0, 0]),
        branch=branch,
        y=float(out["y"][0, 0]),
        tau1=float(out["tau1"][0, 0]) if boundary_wins else None,
        tau2=float(out["tau2"][0, 0]) if boundary_wins else None,
        interior_value=float(out["interior"][0, 0]),
        boundary_value=float(out["boundary"][0, 0]),
    )


def exact_solution(spec: ProblemSpec, x: float, t: float,
                   params: PathCostParams | None = None) -> State:
    """Entropy solution at one node: u = p + (-1)^{j+1} k, sigma from c."""
    res = value_function(spec, x, t, params)
    sh, c = spec.constants.shift, spec.constants.c
    u = res.p + sh
    return State(u=u, sigma=sh * u + c)


def solve_variational(spec: ProblemSpec, grid: Grid,
                      params: PathCostParams | None = None) -> FieldGrid:
    """Sample the exact solution on a grid.

    meta carries per-node minimizer data: value, y, tau1, tau2 (NaN on
    interior nodes), interior_value, boundary_value.
    """
    params = params or PathCostParams()
    grid.require_positive_time()
    tables = build_tables(spec, params, float(grid.x[-1]), float(grid.t[-1]))
    out = _minimize_grid(spec, tables, grid.x, grid.t, params)

    field = FieldGrid.allocate(grid)
    sh, c = spec.constants.shift, spec.constants.c
    field.u = out["p"] + sh
    field.sigma = sh * field.u + c
    field.fill_invariants(spec.constants.k)
    field.case[:] = "-"
    field.branch[:] = "interior"
    field.branch[out["boundary_wins"]] = "boundary"
    field.branch[out["tie"]] = "tie"
    field.meta = {
        "value": out["value"],
        "y": out["y"],
        "tau1": out["tau1"],
        "tau2": out["tau2"],
        "interior_value": out["interior"],
        "boundary_value": out["boundary"],
    }
    return field
