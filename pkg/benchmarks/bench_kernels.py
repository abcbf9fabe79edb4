"""Benchmark the compiled kernels against the NumPy fallback.

Runs the two hot paths — the variational grid minimization and the viscous
Burgers march — on identical inputs through both backends and reports wall
times and speedups.  Usage:

    python3 benchmarks/bench_kernels.py [--nx 161] [--nt 41] [--repeats 3]
"""

import argparse
import time

import numpy as np

from elastoqp.core import ModelConstants, PiecewiseFn, ProblemSpec
from elastoqp.kernels import pykernels
from elastoqp.variational import PathCostParams, build_tables

try:
    from elastoqp.kernels import _speedups
except ImportError:
    _speedups = None


def _spec():
    mc = ModelConstants(k=1.0, j=1, c=0.0)
    v0 = PiecewiseFn.from_knots([0.0, 1.0, 2.0, 3.5], [1.5, -0.5, 1.0, 0.2])
    vb = PiecewiseFn.from_knots([0.0, 1.0, 2.0], [1.5, -1.0, 0.5])
    u0 = v0.shifted(mc.shift)
    ub = vb.shifted(mc.shift)
    return ProblemSpec(constants=mc, u0=u0, sigma0=u0.scaled(mc.shift),
                       ub=ub, sigmab=ub.scaled(mc.shift))


def minimize_grid_case(nx, nt):
    params = PathCostParams()
    tables = build_tables(_spec(), params, x_hi=4.0, t_hi=2.0)
    xs = np.linspace(0.0, 4.0, nx)
    ts = np.linspace(2.0 / nt, 2.0, nt)
    args = (xs, ts, tables.yb, tables.a, tables.s, tables.P,
            tables.sq, tables.qs, tables.Qv, tables.growth, -1.0,
            params.n_tau, params.search_tol)
    return lambda mod: mod.minimize_grid(*args)


def burgers_case(nx, scheme):
    eps = 0.05
    x = np.linspace(0.0, 4.0, nx)
    v0 = 1.5 + 0.5 * np.tanh(3.0 * (1.0 - x)) + 0.05 * np.sin(5.0 * x)
    dx = float(x[1] - x[0])
    # explicit needs the diffusive limit too; semi-implicit only advection
    dt = dx / 3.0
    if scheme == 0:
        dt = min(dt, dx * dx / (2.0 * eps))
    dt *= 0.3
    nsteps = int(0.5 / dt)
    vb = 2.0 + 0.3 * np.sin(2.0 * dt * np.arange(nsteps + 1))
    snaps = np.asarray([nsteps], dtype=np.int64)
    args = (v0, vb, dx, dt, eps, nsteps, snaps, float(v0[-1]), scheme, 1e3)

    def run(mod):
        out, status = mod.burgers_run(*args)
        assert status == -1, "march stopped early; benchmark case is invalid"
        return out

    return run


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nx", type=int, default=161,
                        help="spatial nodes for the grid minimization")
    parser.add_argument("--nt", type=int, default=41,
                        help="time rows for the grid minimization")
    parser.add_argument("--march-nx", type=int, default=801,
                        help="spatial nodes for the viscous march")
    parser.add_argument("--repeats", type=int, default=3,
                        help="repetitions per case; best time is reported")
    args = parser.parse_args(argv)

    if _speedups is None:
        parser.exit(1, "compiled kernels are not built; install with "
                       "`pip install -e . --no-build-isolation`\n")

    cases = [
        ("minimize_grid %dx%d" % (args.nt, args.nx),
         minimize_grid_case(args.nx, args.nt)),
        ("burgers_run explicit n=%d" % args.march_nx,
         burgers_case(args.march_nx, 0)),
        ("burgers_run semi-implicit n=%d" % args.march_nx,
         burgers_case(args.march_nx, 1)),
    ]
    print(f"{'case':<34} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, make in cases:
        t_py = best_of(lambda: make(pykernels), args.repeats)
        t_cy = best_of(lambda: make(_speedups), args.repeats)
        print(f"{name:<34} {t_py:>9.4f}s {t_cy:>9.4f}s "
              f"{t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
