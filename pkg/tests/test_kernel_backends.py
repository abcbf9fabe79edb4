"""Backend equivalence: compiled Cython kernels vs the NumPy fallback.

Both backends implement the same algorithms with the same candidate
ordering; on this build they agree bitwise, but the assertions leave ulp
headroom for compilers that contract floating-point expressions.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from elastoqp import kernels
from elastoqp.core import ModelConstants, PiecewiseFn, ProblemSpec
from elastoqp.kernels import pykernels as pk
from elastoqp.variational import PathCostParams, build_tables

speedups = pytest.importorskip(
    "elastoqp.kernels._speedups",
    reason="compiled kernels not built in this environment",
)


def _spec(v0, vb, k=1.0, j=1, c=0.0):
    mc = ModelConstants(k=k, j=j, c=c)
    u0 = v0.shifted(mc.shift)
    ub = vb.shifted(mc.shift)
    return ProblemSpec(
        constants=mc,
        u0=u0, sigma0=u0.scaled(mc.shift).shifted(c),
        ub=ub, sigmab=ub.scaled(mc.shift).shifted(c),
    )


def _grid_args(with_boundary=True):
    v0 = PiecewiseFn.from_knots([0.0, 1.0, 2.0, 3.5], [1.5, -0.5, 1.0, 0.2])
    vb = PiecewiseFn.from_knots([0.0, 1.0, 2.0], [1.5, -1.0, 0.5])
    spec = _spec(v0, vb)
    params = PathCostParams()
    tables = build_tables(spec, params, x_hi=4.0, t_hi=2.0)
    empty = np.empty(0)
    xs = np.linspace(0.0, 4.0, 37)
    ts = np.linspace(0.05, 2.0, 23)
    return (
        xs, ts, tables.yb, tables.a, tables.s, tables.P,
        tables.sq if with_boundary else empty,
        tables.qs if with_boundary else empty,
        tables.Qv if with_boundary else empty,
        tables.growth, -1.0, params.n_tau, params.search_tol,
    )


def _march_data():
    x = np.linspace(0.0, 4.0, 201)
    v0 = 1.5 + 0.5 * np.tanh(3.0 * (1.0 - x)) + 0.05 * np.sin(5.0 * x)
    dx = float(x[1] - x[0])
    dt = 0.3 * dx / 3.0
    nsteps = 400
    tvals = dt * np.arange(nsteps + 1)
    vb = 2.0 + 0.3 * np.sin(2.0 * tvals)
    snaps = np.asarray([0, 100, 400], dtype=np.int64)
    return x, v0, vb, dx, dt, nsteps, tvals, snaps


class TestBackendSelection:
    def test_compiled_backend_is_active(self):
        # The extension imported above, and the suite does not set the
        # override, so the package-level alias must be the compiled one.
        assert kernels.backend_name() == "compiled"
        assert kernels.minimize_grid is speedups.minimize_grid

    def test_force_python_env_selects_fallback(self):
        code = "from elastoqp import kernels; print(kernels.backend_name())"
        out = subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, "ELASTOQP_FORCE_PYTHON": "1"},
            capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "python"

    def test_clean_env_selects_compiled(self):
        code = "from elastoqp import kernels; print(kernels.backend_name())"
        env = {k: v for k, v in os.environ.items()
               if k != "ELASTOQP_FORCE_PYTHON"}
        out = subprocess.run(
            [sys.executable, "-c", code],
            env=env, capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "compiled"


class TestMinimizeGridEquivalence:
    def test_with_boundary_tables(self):
        args = _grid_args()
        ref = pk.minimize_grid(*args)
        got = speedups.minimize_grid(*args)
        for name, r, g in zip("iv iy bv by bt1 bt2 bp".split(), ref, got):
            np.testing.assert_allclose(g, r, rtol=0.0, atol=1e-10,
                                       err_msg=name)

    def test_without_boundary_tables(self):
        args = _grid_args(with_boundary=False)
        ref = pk.minimize_grid(*args)
        got = speedups.minimize_grid(*args)
        np.testing.assert_allclose(got[0], ref[0], rtol=0.0, atol=1e-10)
        np.testing.assert_allclose(got[1], ref[1], rtol=0.0, atol=1e-10)
        assert np.all(np.isinf(got[2])) and np.all(np.isinf(ref[2]))
        for r, g in zip(ref[3:], got[3:]):
            np.testing.assert_array_equal(g, r)

    def test_fixed_y_horizon(self):
        args = list(_grid_args())
        args[10] = 12.0  # y_override
        ref = pk.minimize_grid(*args)
        got = speedups.minimize_grid(*args)
        for r, g in zip(ref, got):
            np.testing.assert_allclose(g, r, rtol=0.0, atol=1e-10)


class TestMarchEquivalence:
    @pytest.mark.parametrize("scheme", [0, 1])
    def test_burgers_run(self, scheme):
        x, v0, vb, dx, dt, nsteps, tvals, snaps = _march_data()
        ref, rs = pk.burgers_run(v0, vb, dx, dt, 0.05, nsteps, snaps,
                                 float(v0[-1]), scheme, 1e3)
        got, gs = speedups.burgers_run(v0, vb, dx, dt, 0.05, nsteps, snaps,
                                       float(v0[-1]), scheme, 1e3)
        assert gs == rs == -1
        np.testing.assert_allclose(got, ref, rtol=0.0, atol=1e-9)

    @pytest.mark.parametrize("scheme", [0, 1])
    def test_system_run(self, scheme):
        x, _, _, dx, dt, nsteps, tvals, snaps = _march_data()
        w1_0 = 1.0 + 0.2 * np.cos(2.0 * x)
        w2_0 = 3.0 + 0.1 * np.sin(3.0 * x)
        w1b = 1.0 + 0.05 * tvals
        w2b = 3.0 - 0.02 * np.sin(tvals)
        ref = pk.system_run(w1_0, w2_0, w1b, w2b, 0.7, dx, dt, 0.05, nsteps,
                            snaps, float(w1_0[-1]), float(w2_0[-1]),
                            scheme, 1e3)
        got = speedups.system_run(w1_0, w2_0, w1b, w2b, 0.7, dx, dt, 0.05,
                                  nsteps, snaps, float(w1_0[-1]),
                                  float(w2_0[-1]), scheme, 1e3)
        assert got[2] == ref[2] == -1
        np.testing.assert_allclose(got[0], ref[0], rtol=0.0, atol=1e-9)
        np.testing.assert_allclose(got[1], ref[1], rtol=0.0, atol=1e-9)

    def test_far_guard_trips_at_same_step(self):
        x, v0, vb, dx, dt, nsteps, tvals, snaps = _march_data()
        _, rs = pk.burgers_run(v0, vb, dx, dt, 0.05, nsteps, snaps,
                               float(v0[-1]), 0, 1e-12)
        _, gs = speedups.burgers_run(v0, vb, dx, dt, 0.05, nsteps, snaps,
                                     float(v0[-1]), 0, 1e-12)
        assert rs == gs >= 0

    def test_inputs_not_mutated(self):
        x, v0, vb, dx, dt, nsteps, tvals, snaps = _march_data()
        keep = v0.copy()
        speedups.burgers_run(v0, vb, dx, dt, 0.05, 50, snaps,
                             float(v0[-1]), 0, 1e3)
        np.testing.assert_array_equal(v0, keep)


class TestSolverLevelEquivalence:
    """Full solver runs under the forced fallback match the compiled path."""

    def test_variational_grid_matches(self, tmp_path):
        script = tmp_path / "fallback_run.py"
        npz = tmp_path / "fallback.npz"
        script.write_text(
            "import numpy as np\n"
            "from elastoqp.core import ModelConstants, PiecewiseFn, "
            "ProblemSpec\n"
            "from elastoqp.fields import Grid\n"
            "from elastoqp.variational import solve_variational\n"
            "mc = ModelConstants(k=1.0, j=1, c=0.0)\n"
            "v0 = PiecewiseFn.from_knots([0.0, 1.0, 2.0], [1.5, -0.5, 1.0])\n"
            "vb = PiecewiseFn.from_knots([0.0, 1.0], [0.5, -1.0])\n"
            "u0 = v0.shifted(mc.shift)\n"
            "ub = vb.shifted(mc.shift)\n"
            "spec = ProblemSpec(constants=mc, u0=u0,\n"
            "    sigma0=u0.scaled(mc.shift), ub=ub,\n"
            "    sigmab=ub.scaled(mc.shift))\n"
            "field = solve_variational(spec, Grid.regular(3.0, 1.5, 25, 9))\n"
            "np.savez(%r, u=field.u, sigma=field.sigma,\n"
            "         value=field.meta['value'])\n" % str(npz)
        )
        subprocess.run(
            [sys.executable, str(script)],
            env={**os.environ, "ELASTOQP_FORCE_PYTHON": "1"},
            check=True,
        )
        from elastoqp.core import ModelConstants as MC
        from elastoqp.fields import Grid
        from elastoqp.variational import solve_variational

        mc = MC(k=1.0, j=1, c=0.0)
        v0 = PiecewiseFn.from_knots([0.0, 1.0, 2.0], [1.5, -0.5, 1.0])
        vb = PiecewiseFn.from_knots([0.0, 1.0], [0.5, -1.0])
        u0 = v0.shifted(mc.shift)
        ub = vb.shifted(mc.shift)
        spec = ProblemSpec(constants=mc, u0=u0, sigma0=u0.scaled(mc.shift),
                           ub=ub, sigmab=ub.scaled(mc.shift))
        field = solve_variational(spec, Grid.regular(3.0, 1.5, 25, 9))
        data = np.load(npz)
        np.testing.assert_allclose(field.u, data["u"], rtol=0.0, atol=1e-10)
        np.testing.assert_allclose(field.sigma, data["sigma"],
                                   rtol=0.0, atol=1e-10)
        np.testing.assert_allclose(field.meta["value"], data["value"],
                                   rtol=0.0, atol=1e-10)
