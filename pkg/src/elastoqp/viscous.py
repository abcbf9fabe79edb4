"""Viscous regularization on a truncated domain, and its inviscid limit.

Two solvers share one finite-difference core: the scalar reduction
v_t + v v_x = eps v_xx for level-set data, and the full 2x2 system stepped
in invariant form (w1 advected at u + k, w2 at u - k, shared centered
diffusion).  Advection is first-order upwind by the local speed sign, so
explicit runs with cfl_safety <= 0.5 are monotone; the semi-implicit scheme
treats diffusion by backward Euler and keeps only the advective step-size
restriction.  The inflow value is imposed strongly at x = 0, the far node at
x = length is frozen, and a guard on the adjacent node aborts the run if
waves reach the artificial boundary (DomainTooShort).

verify_convergence runs the scalar solver over a decreasing viscosity list
and reports discrete L1 distances to the exact (path-minimization) solution
on the same grid, checking the vanishing-viscosity limit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import PiecewiseFn, ProblemSpec, check_level_set
from .errors import CFLViolation, DomainTooShort, WrongCase
from .fields import FieldGrid, Grid
from .variational import PathCostParams, solve_variational, u0_potential

__all__ = [
    "Scheme",
    "ViscousConfig",
    "ViscousRun",
    "HopfColeSample",
    "ConvergenceReport",
    "solve_scalar_viscous",
    "solve_system_viscous",
    "hopf_cole_initial",
    "verify_convergence",
    "viscous_to_fieldgrid",
]


class Scheme(enum.Enum):
    EXPLICIT_UPWIND = "explicit"
    SEMI_IMPLICIT = "semi-implicit"


@dataclass(frozen=True)
class ViscousConfig:
    """Discretization of the truncated quarter plane [0, length] x [0, t_end].

    nx cells (nx + 1 nodes); snapshot_times defaults to (t_end,).  Snapshots
    are taken at the nearest step boundary; recorded times are exact step
    multiples.  far_guard_tol is the drift allowed at the node next to the
    frozen far boundary before DomainTooShort is raised.
    """

    epsilon: float
    length: float
    nx: int
    t_end: float
    cfl_safety: float = 0.4
    scheme: Scheme = Scheme.EXPLICIT_UPWIND
    snapshot_times: tuple[float, ...] | None = None
    far_guard_tol: float = 1e-6
    max_steps: int = 100_000_000

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")
        if not self.length > 0.0:
            raise ValueError("length must be positive")
        if self.nx < 16:
            raise ValueError("nx must be >= 16")
        if not self.t_end > 0.0:
            raise ValueError("t_end must be positive")
        if not 0.0 < self.cfl_safety <= 1.0:
            raise ValueError("cfl_safety must be in (0, 1]")
        if not self.far_guard_tol > 0.0:
            raise ValueError("far_guard_tol must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.snapshot_times is not None:
            ts = tuple(float(t) for t in self.snapshot_times)
            if any(t < 0.0 or t > self.t_end for t in ts):
                raise ValueError("snapshot times must lie in [0, t_end]")
            if list(ts) != sorted(set(ts)):
                raise ValueError("snapshot times must be strictly increasing")
            object.__setattr__(self, "snapshot_times", ts)

    @property
    def dx(self) -> float:
        return self.length / self.nx


@dataclass
class ViscousRun:
    """Snapshots of a viscous run: arrays are (n_snapshots, nx + 1)."""

    config: ViscousConfig
    kind: str
    x: np.ndarray
    times: np.ndarray
    u: np.ndarray
    sigma: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    dt: float
    n_steps: int

    @property
    def boundary_trace(self) -> tuple[np.ndarray, np.ndarray]:
        """(times, u(0, times)) as imposed by the inflow datum."""
        return self.times, self.u[:, 0]

    def final(self) -> np.ndarray:
        """u profile of the last snapshot."""
        return self.u[-1]


@dataclass(frozen=True)
class HopfColeSample:
    """exp(-U0(x) / (2 eps)), or its exponent when it would overflow."""

    value: float
    is_log: bool


@dataclass(frozen=True)
class ConvergenceReport:
    """L1 distances to the exact solution for a decreasing viscosity list."""

    epsilons: tuple[float, ...]
    l1_errors: tuple[float, ...]
    monotone: bool
    t_end: float
    dx: float


def _pick_steps(cfg: ViscousConfig, speed_bound: float) -> tuple[float, int]:
    """Time step from the CFL bounds; lands exactly on t_end."""
    dx = cfg.dx
    bounds = []
    if cfg.scheme is Scheme.EXPLICIT_UPWIND:
        bounds.append(dx * dx / (2.0 * cfg.epsilon))
    if speed_bound > 0.0:
        bounds.append(dx / speed_bound)
    dt0 = cfg.cfl_safety * min(bounds) if bounds else cfg.cfl_safety * dx
    n = max(1, math.ceil(cfg.t_end / dt0))
    if n > cfg.max_steps:
        raise CFLViolation(
            f"stability needs {n} steps, budget is {cfg.max_steps}; "
            f"coarsen the grid or raise max_steps"
        )
    return cfg.t_end / n, n


def _snapshot_steps(cfg: ViscousConfig, dt: float, n_steps: int):
    wanted = cfg.snapshot_times if cfg.snapshot_times is not None else (cfg.t_end,)
    steps = sorted({min(n_steps, round(t / dt)) for t in wanted})
    return np.asarray(steps, dtype=np.int64)


def _scheme_code(cfg: ViscousConfig) -> int:
    return 0 if cfg.scheme is Scheme.EXPLICIT_UPWIND else 1


def solve_scalar_viscous(spec: ProblemSpec, cfg: ViscousConfig) -> ViscousRun:
    """March the scalar reduction; data must lie on the level set."""
    if not check_level_set(spec, tol=1e-9).ok:
        raise WrongCase("scalar viscous solver needs level-set data")
    v0_fn = spec.shifted_initial()
    vb_fn = spec.shifted_boundary()
    speed_bound = max(
        v0_fn.max_abs_on(0.0, cfg.length),
        vb_fn.max_abs_on(0.0, cfg.t_end),
    )
    dt, n_steps = _pick_steps(cfg, speed_bound)
    x = np.linspace(0.0, cfg.length, cfg.nx + 1)
    v0 = v0_fn.eval_many(x)
    vb_steps = vb_fn.eval_many(dt * np.arange(n_steps + 1))
    snap_steps = _snapshot_steps(cfg, dt, n_steps)
    snaps, status = kernels.burgers_run(
        v0, vb_steps, cfg.dx, dt, cfg.epsilon, n_steps, snap_steps,
        float(v0[-1]), _scheme_code(cfg), cfg.far_guard_tol,
    )
    if status >= 0:
        raise DomainTooShort(
            f"wave reached x = {cfg.length} near t = {status * dt:.6g}; "
            f"extend the domain"
        )
    sh, c, k = spec.constants.shift, spec.constants.c, spec.constants.k
    u = snaps + sh
    sigma = sh * u + c
    return ViscousRun(
        config=cfg, kind="scalar", x=x, times=snap_steps * dt,
        u=u, sigma=sigma, w1=sigma - k * u, w2=sigma + k * u,
        dt=dt, n_steps=n_steps,
    )


def solve_system_viscous(spec: ProblemSpec, cfg: ViscousConfig) -> ViscousRun:
    """March the full 2x2 system in invariant variables; general data."""
    k = spec.constants.k
    ub = spec.require_boundary()
    if spec.sigmab is None:
        raise WrongCase("system solver needs sigmab boundary data")
    w10_fn = PiecewiseFn.combine(1.0, spec.sigma0, -k, spec.u0)
    w20_fn = PiecewiseFn.combine(1.0, spec.sigma0, k, spec.u0)
    w1b_fn = PiecewiseFn.combine(1.0, spec.sigmab, -k, ub)
    w2b_fn = PiecewiseFn.combine(1.0, spec.sigmab, k, ub)

    # speed bound from invariant ranges: u = (w2 - w1)/(2k), speeds u +- k
    w1_lo = min(w10_fn.bounds_on(0.0, cfg.length)[0], w1b_fn.bounds_on(0.0, cfg.t_end)[0])
    w1_hi = max(w10_fn.bounds_on(0.0, cfg.length)[1], w1b_fn.bounds_on(0.0, cfg.t_end)[1])
    w2_lo = min(w20_fn.bounds_on(0.0, cfg.length)[0], w2b_fn.bounds_on(0.0, cfg.t_end)[0])
    w2_hi = max(w20_fn.bounds_on(0.0, cfg.length)[1], w2b_fn.bounds_on(0.0, cfg.t_end)[1])
    u_lo = (w2_lo - w1_hi) / (2.0 * k)
    u_hi = (w2_hi - w1_lo) / (2.0 * k)
    speed_bound = max(abs(u_lo - k), abs(u_hi + k), abs(u_lo + k), abs(u_hi - k))

    dt, n_steps = _pick_steps(cfg, speed_bound)
    x = np.linspace(0.0, cfg.length, cfg.nx + 1)
    step_times = dt * np.arange(n_steps + 1)
    snap_steps = _snapshot_steps(cfg, dt, n_steps)
    w1_0 = w10_fn.eval_many(x)
    w2_0 = w20_fn.eval_many(x)
    snaps1, snaps2, status = kernels.system_run(
        w1_0, w2_0,
        w1b_fn.eval_many(step_times), w2b_fn.eval_many(step_times),
        k, cfg.dx, dt, cfg.epsilon, n_steps, snap_steps,
        float(w1_0[-1]), float(w2_0[-1]), _scheme_code(cfg), cfg.far_guard_tol,
    )
    if status >= 0:
        raise DomainTooShort(
            f"wave reached x = {cfg.length} near t = {status * dt:.6g}; "
            f"extend the domain"
        )
    u = (snaps2 - snaps1) / (2.0 * k)
    sigma = 0.5 * (snaps1 + snaps2)
    return ViscousRun(
        config=cfg, kind="system", x=x, times=snap_steps * dt,
        u=u, sigma=sigma, w1=snaps1, w2=snaps2,
        dt=dt, n_steps=n_steps,
    )


def hopf_cole_initial(spec: ProblemSpec, x: float, eps: float) -> HopfColeSample:
    """Hopf-Cole transform of the initial data, w(x, 0) = exp(-U0(x)/(2 eps)).

    When |U0(x)/(2 eps)| > 700 the exponential would leave double range; the
    exponent itself is returned with is_log = True.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    exponent = -u0_potential(spec, x) / (2.0 * eps)
    if abs(exponent) > 700.0:
        return HopfColeSample(value=exponent, is_log=True)
    return HopfColeSample(value=math.exp(exponent), is_log=False)


def _l1_distance(dx: float, diff: np.ndarray) -> float:
    w = np.full(diff.size, dx)
    w[0] = w[-1] = 0.5 * dx
    return float(np.sum(w * np.abs(diff)))


def verify_convergence(spec: ProblemSpec, epsilons, cfg: ViscousConfig,
                       params: PathCostParams | None = None,
                       reference: FieldGrid | None = None) -> ConvergenceReport:
    """Scalar viscous runs over decreasing epsilons vs the exact solution.

    Reports the discrete (trapezoid) L1 distance of u at t_end for each
    viscosity and whether the sequence strictly decreases.  The reference, if
    given, must hold the exact solution on the viscous grid with t_end as its
    last row; otherwise it is computed with the path-minimization solver.
    """
    eps_list = tuple(float(e) for e in epsilons)
    if not eps_list or any(e <= 0.0 for e in eps_list):
        raise ValueError("epsilons must be positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("epsilons must be strictly decreasing")

    x = np.linspace(0.0, cfg.length, cfg.nx + 1)
    if reference is not None:
        if reference.grid.x.size != x.size or not np.allclose(reference.grid.x, x):
            raise ValueError("reference grid does not match the viscous grid")
        if not math.isclose(reference.grid.t[-1], cfg.t_end):
            raise ValueError("reference must end at t_end")
        exact = reference.u[-1]
    else:
        exact = solve_variational(
            spec, Grid(x=x, t=np.asarray([cfg.t_end])), params
        ).u[0]
    errors = []
    for eps in eps_list:
        run_cfg = ViscousConfig(
            epsilon=eps, length=cfg.length, nx=cfg.nx, t_end=cfg.t_end,
            cfl_safety=cfg.cfl_safety, scheme=cfg.scheme,
            snapshot_times=(cfg.t_end,), far_guard_tol=cfg.far_guard_tol,
            max_steps=cfg.max_steps,
        )
        run = solve_scalar_viscous(spec, run_cfg)
        errors.append(_l1_distance(cfg.dx, run.final() - exact))
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    return ConvergenceReport(
        epsilons=eps_list, l1_errors=tuple(errors), monotone=monotone,
        t_end=cfg.t_end, dx=cfg.dx,
    )


def viscous_to_fieldgrid(run: ViscousRun) -> FieldGrid:
    """Adapter: view snapshots with t > 0 as a FieldGrid for the checkers."""
    keep = run.times > 0.0
    if not np.any(keep):
        raise ValueError("run has no snapshots with t > 0")
    grid = Grid(x=run.x, t=run.times[keep])
    field = FieldGrid.allocate(grid)
    field.u = run.u[keep]
    field.sigma = run.sigma[keep]
    field.w1 = run.w1[keep]
    field.w2 = run.w2[keep]
    field.case[:] = "viscous"
    field.branch[:] = run.kind
    return field
