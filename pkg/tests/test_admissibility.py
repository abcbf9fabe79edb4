"""Tests for elastoqp.admissibility: BLN/trace sets and entropy checks."""

import numpy as np
import pytest

from elastoqp import (
    FieldGrid,
    Grid,
    ModelConstants,
    PiecewiseFn,
    ProblemSpec,
    RiemannData,
    bln_admissible,
    bln_set_contains,
    check_boundary_admissibility,
    check_entropy,
    lefloch_admissible,
    solve_riemann,
    solve_variational,
)

K1 = ModelConstants(k=1.0, j=1, c=0.0)  # shift = +1


def const_spec(u0, ub, constants=K1):
    return ProblemSpec.on_level_set(
        constants, PiecewiseFn.constant(u0), PiecewiseFn.constant(ub))


class TestBlnSetContains:
    def test_datum_itself_when_positive(self):
        assert bln_set_contains(2.0, 2.0)

    def test_fast_outflow_when_positive(self):
        # vb = 2: the ray (-inf, -2) is admissible.
        assert bln_set_contains(-3.0, 2.0)
        assert not bln_set_contains(-1.0, 2.0)
        assert not bln_set_contains(0.5, 2.0)

    def test_nonpositive_datum(self):
        # vb <= 0: E = (-inf, 0].
        assert bln_set_contains(-1.0, -0.5)
        assert bln_set_contains(0.0, -0.5)
        assert not bln_set_contains(0.3, -0.5)
        assert bln_set_contains(-5.0, 0.0)
        assert not bln_set_contains(0.2, 0.0)

    def test_tolerance_band(self):
        assert bln_set_contains(2.0 + 5e-10, 2.0, tol=1e-9)
        assert not bln_set_contains(2.0 + 5e-10, 2.0, tol=1e-10)
        assert bln_set_contains(-2.0 + 5e-10, 2.0, tol=1e-9)

    def test_open_ray_boundary(self):
        # -vb itself is in the closure; accepted within tol by design.
        assert bln_set_contains(-2.0, 2.0)


class TestTraceCheckers:
    def test_datum_attained(self):
        # u = 3, ub = 3, j = 1, k = 1: v = vb = 2 > 0.
        assert bln_admissible(3.0, 3.0, K1)
        assert lefloch_admissible(3.0, 3.0, K1)

    def test_wall_state_against_inflow_datum(self):
        # u = 0, ub = 2: v = -1, vb = 1; v <= -vb puts it in E(vb).
        assert bln_admissible(0.0, 2.0, K1)
        assert lefloch_admissible(0.0, 2.0, K1)

    def test_outflow_ignores_datum(self):
        # u = 1, ub = 0: v = 0, vb = -1: E = (-inf, 0] contains 0.
        assert bln_admissible(1.0, 0.0, K1)
        assert lefloch_admissible(1.0, 0.0, K1)

    def test_rejections(self):
        # v = 1, vb = 2: neither the datum nor fast enough outflow.
        assert not bln_admissible(2.0, 3.0, K1)
        assert not lefloch_admissible(2.0, 3.0, K1)
        # v = 0.5 > 0 with vb <= 0.
        assert not bln_admissible(1.5, 1.0, K1)
        assert not lefloch_admissible(1.5, 1.0, K1)

    def test_respects_shift_convention(self):
        k2 = ModelConstants(k=1.0, j=2, c=0.0)  # shift = -1
        # u = 1 gives v = 2 under j = 2; datum ub = 1 gives vb = 2.
        assert bln_admissible(1.0, 1.0, k2)
        # same primitive values under j = 1 give v = 0 vs vb = 0: inflow off.
        assert bln_admissible(1.0, 1.0, K1)

    def test_agreement_on_dense_scan(self):
        # The two formulations describe the same closed set; scan a box of
        # (v, vb) pairs away from the branch boundaries where a tol-width
        # band may classify either way.
        vs = np.linspace(-5.0, 5.0, 201)
        vbs = np.linspace(-5.0, 5.0, 201)
        tol = 1e-9
        for vb in vbs:
            near_branch = np.minimum(
                np.abs(vs - max(vb, 0.0)),
                np.minimum(np.abs(vs + max(vb, 0.0)), np.abs(vs)))
            for v, nb in zip(vs, near_branch):
                if nb <= 2.0 * tol:
                    continue
                a = bln_admissible(v + 1.0, vb + 1.0, K1, tol=tol)
                b = lefloch_admissible(v + 1.0, vb + 1.0, K1, tol=tol)
                assert a == b, (v, vb)


class TestCheckBoundaryAdmissibility:
    def test_shock_case_field_passes(self):
        # C6: trace equals the datum behind the shock.
        data = RiemannData(K1, u0=1.2, ub=3.0)
        grid = Grid.regular(4.0, 2.0, 101, 9)
        field = solve_riemann(data, grid)
        spec = const_spec(1.2, 3.0)
        report = check_boundary_admissibility(field, spec)
        assert report.ok
        assert report.trace_column == 1
        assert report.rows_checked == 9

    def test_outflow_case_field_passes(self):
        # C4: vb < 0 < v0, trace sits at v = 0+ (fan foot).
        data = RiemannData(K1, u0=2.5, ub=0.0)
        grid = Grid.regular(4.0, 2.0, 101, 9)
        field = solve_riemann(data, grid)
        spec = const_spec(2.5, 0.0)
        report = check_boundary_admissibility(field, spec)
        assert report.ok

    def test_variational_field_passes(self):
        spec = const_spec(1.2, 3.0)
        field = solve_variational(spec, Grid.regular(3.0, 1.5, 61, 6))
        report = check_boundary_admissibility(field, spec)
        assert report.ok

    def test_corrupted_trace_flagged(self):
        data = RiemannData(K1, u0=1.2, ub=3.0)
        grid = Grid.regular(4.0, 2.0, 101, 9)
        field = solve_riemann(data, grid)
        spec = const_spec(1.2, 3.0)
        # Trace v = 1 against vb = 2 is inadmissible for both checkers.
        for r in range(field.u.shape[0]):
            field.u[r, 1] = 2.0
        report = check_boundary_admissibility(field, spec)
        assert not report.ok
        kinds = {v.kind for v in report.violations}
        assert kinds == {"bln", "lefloch"}
        assert len(report.violations) == 2 * 9
        first = report.violations[0]
        assert first.x == pytest.approx(field.grid.x[1])
        assert first.value == 2.0
        assert first.datum == 3.0

    def test_oleinik_slack_depends_on_row_time(self):
        # A trace offset below x1/t passes at small t but fails at large t
        # once the envelope tightens.
        data = RiemannData(K1, u0=1.2, ub=3.0)
        x = np.array([0.0, 0.4, 4.0])
        t = np.array([0.5, 8.0])
        field = solve_riemann(data, Grid(x, t))
        spec = const_spec(1.2, 3.0)
        field.u[:, 1] = 3.0 - 0.3  # offset 0.3 vs slack 0.8 then 0.05
        report = check_boundary_admissibility(field, spec)
        assert not report.ok
        assert {v.t for v in report.violations} == {8.0}

    def test_explicit_tol_override(self):
        data = RiemannData(K1, u0=1.2, ub=3.0)
        field = solve_riemann(data, Grid.regular(4.0, 2.0, 101, 5))
        spec = const_spec(1.2, 3.0)
        report = check_boundary_admissibility(field, spec, tol=1e-12)
        assert report.ok  # closed form holds the datum exactly behind shock


class TestCheckEntropy:
    def test_fan_saturates_but_passes(self):
        data = RiemannData(K1, u0=2.5, ub=0.0)  # C4 fan
        field = solve_riemann(data, Grid.regular(4.0, 2.0, 101, 9))
        spec = const_spec(2.5, 0.0)
        report = check_entropy(field, spec)
        assert report.ok
        assert report.rows_checked == 9

    def test_shock_passes(self):
        data = RiemannData(K1, u0=1.2, ub=3.0)
        field = solve_riemann(data, Grid.regular(4.0, 2.0, 101, 9))
        spec = const_spec(1.2, 3.0)
        assert check_entropy(field, spec).ok

    def test_upward_jump_flagged(self):
        # An entropy-violating (upward) jump of height 1 over one cell.
        spec = const_spec(1.2, 3.0)
        grid = Grid.regular(4.0, 2.0, 101, 4)
        field = FieldGrid.allocate(grid)
        field.u[:] = 1.2
        field.u[:, 50:] = 2.2
        report = check_entropy(field, spec)
        assert not report.ok
        assert all(v.kind == "entropy" for v in report.violations)
        assert len(report.violations) == 4
        v = report.violations[0]
        assert v.value == pytest.approx(1.0)
        assert v.x == pytest.approx(grid.x[49])

    def test_tolerance_scales_with_dx_over_t(self):
        # The same ramp is fine at t = 1 and an entropy violation at t = 4.
        spec = const_spec(1.2, 3.0)
        x = np.linspace(0.0, 4.0, 41)
        field = FieldGrid.allocate(Grid(x, np.array([1.0, 4.0])))
        field.u[:] = 1.0 + 0.5 * x[None, :]  # dv/dx = 0.5
        report = check_entropy(field, spec)
        assert not report.ok
        assert {v.t for v in report.violations} == {4.0}
        clean = FieldGrid.allocate(Grid(x, np.array([1.0])))
        clean.u[:] = 1.0 + 0.5 * x[None, :]
        assert check_entropy(clean, spec).ok

    def test_skips_t0_rows(self):
        spec = const_spec(1.2, 3.0)
        x = np.linspace(0.0, 4.0, 41)
        field = FieldGrid.allocate(Grid(x, np.array([0.0, 1.0])))
        field.u[0] = 1.0 + 2.0 * x  # steep initial ramp: not checked
        field.u[1] = 1.2
        report = check_entropy(field, spec)
        assert report.ok
        assert report.rows_checked == 1
