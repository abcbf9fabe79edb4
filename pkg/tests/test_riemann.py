"""Tests for elastoqp.riemann: closed-form boundary Riemann solutions."""

import numpy as np
import pytest

import oracles
from elastoqp import (
    Grid,
    ModelConstants,
    RiemannCase,
    RiemannData,
    case_thresholds,
    classify,
    on_threshold,
    riemann_solution,
    shock_speed,
    solve_riemann,
)
from elastoqp.errors import (
    DegenerateTime,
    UnclassifiedBoundaryCase,
    WrongCase,
)

K1 = ModelConstants(k=1.0, j=1, c=0.0)  # shift = +1


def data(v0, vb, constants=K1):
    """RiemannData with the given shifted values."""
    sh = constants.shift
    return RiemannData(constants, u0=v0 + sh, ub=vb + sh)


class TestClassify:
    @pytest.mark.parametrize("v0,vb,case", [
        (1.0, 1.0, RiemannCase.C1),
        (0.3, 0.3, RiemannCase.C1),
        (-1.0, -1.0, RiemannCase.C2),
        (2.0, 0.5, RiemannCase.C3),
        (1.5, -1.0, RiemannCase.C4),
        (-0.5, -1.5, RiemannCase.C5),
        (0.0, -1.0, RiemannCase.C5),   # v0 = 0 belongs to C5
        (0.2, 2.0, RiemannCase.C6),
        (1.0, 1.4, RiemannCase.C6),
    ])
    def test_battery(self, v0, vb, case):
        assert classify(data(v0, vb)) == case

    @pytest.mark.parametrize("v0,vb", [
        (0.0, 0.0),    # both at rest
        (1.0, 0.0),    # vb on the C3/C4 boundary
        (-1.0, 1.0),   # stationary shock v0 + vb = 0
        (-2.0, 1.0),   # v0 < vb but v0 + vb < 0: outside all six cases
        (-1.0, 0.0),   # vb = 0 with outflow interior state
    ])
    def test_ties_rejected(self, v0, vb):
        with pytest.raises(UnclassifiedBoundaryCase):
            classify(data(v0, vb))

    def test_shift_convention_enters_classification(self):
        # Same primitive data classify differently across wave families.
        k2 = ModelConstants(k=1.0, j=2, c=0.0)  # shift = -1
        assert classify(RiemannData(K1, u0=1.2, ub=3.0)) == RiemannCase.C6
        assert classify(RiemannData(k2, u0=1.2, ub=3.0)) == RiemannCase.C6
        assert classify(RiemannData(K1, u0=3.0, ub=1.2)) == RiemannCase.C3
        # j = 2 moves both shifted values up by 2k.
        assert classify(RiemannData(k2, u0=-1.8, ub=-3.0)) == \
            RiemannCase.C5


class TestShockSpeed:
    def test_known_speed(self):
        # v0 = 0.2, vb = 2.0: s = 1.1.
        assert shock_speed(data(0.2, 2.0)) == pytest.approx(1.1)

    def test_primitive_example(self):
        # j = 2, k = 1, u0 = 0, ub = 1: shifted data (1, 2), s = 1.5.
        k2 = ModelConstants(k=1.0, j=2, c=0.0)
        d = RiemannData(k2, u0=0.0, ub=1.0)
        assert classify(d) == RiemannCase.C6
        assert shock_speed(d) == pytest.approx(1.5)

    def test_only_defined_for_c6(self):
        with pytest.raises(WrongCase):
            shock_speed(data(2.0, 0.5))

    def test_speed_is_positive(self):
        # C6 requires v0 + vb > 0, so the shock always moves into x > 0.
        for v0, vb in [(0.2, 2.0), (1.0, 1.4), (-0.1, 0.3)]:
            assert shock_speed(data(v0, vb)) > 0.0


class TestThresholds:
    def test_c3_fan_edges(self):
        assert case_thresholds(data(2.0, 0.5)) == (0.5, 2.0)

    def test_c4_fan_edges(self):
        assert case_thresholds(data(1.5, -1.0)) == (0.0, 1.5)

    def test_c6_shock_line(self):
        assert case_thresholds(data(0.2, 2.0)) == (1.1,)

    @pytest.mark.parametrize("v0,vb", [(1.0, 1.0), (-1.0, -1.0), (-0.5, -1.5)])
    def test_constant_cases_have_none(self, v0, vb):
        assert case_thresholds(data(v0, vb)) == ()

    def test_on_threshold_detection(self):
        d = data(0.2, 2.0)
        assert on_threshold(d, 1.1, 1.0)
        assert on_threshold(d, 2.2, 2.0)
        assert not on_threshold(d, 1.1 + 1e-12, 1.0)
        with pytest.raises(DegenerateTime):
            on_threshold(d, 1.0, 0.0)


class TestRiemannSolution:
    def test_c4_fan_point(self):
        # v0 = 1.5, vb = -1 at (0.5, 1): v = x/t = 0.5, u = 1.5.
        state, case = riemann_solution(data(1.5, -1.0), 0.5, 1.0)
        assert case == RiemannCase.C4
        assert state.u == pytest.approx(1.5)

    def test_c6_behind_shock(self):
        # C6 with v0 = 1, vb = 2 is a shock at s = 1.5; behind it v = vb = 2,
        # so u = 3 at (1, 1).
        state, case = riemann_solution(data(1.0, 2.0), 1.0, 1.0)
        assert case == RiemannCase.C6
        assert state.u == pytest.approx(3.0)

    def test_right_continuity_at_shock(self):
        d = data(0.2, 2.0)
        state, _ = riemann_solution(d, 1.1, 1.0)  # exactly on x = s t
        assert state.u == pytest.approx(1.2)       # ahead value v0 + shift
        behind, _ = riemann_solution(d, 1.1 - 1e-9, 1.0)
        assert behind.u == pytest.approx(3.0)

    def test_fan_is_continuous(self):
        d = data(2.0, 0.5)
        t = 1.3
        xs = np.linspace(0.0, 3.5, 701)
        us = np.array([riemann_solution(d, float(x), t)[0].u for x in xs])
        assert np.abs(np.diff(us)).max() <= 2.0 * (xs[1] - xs[0]) / t + 1e-12

    def test_sigma_follows_level_set(self):
        consts = ModelConstants(k=2.0, j=2, c=0.7)
        d = RiemannData(consts, u0=3.5, ub=1.0)
        for x, t in [(0.1, 0.5), (1.0, 1.0), (4.0, 0.8)]:
            state, _ = riemann_solution(d, x, t)
            assert state.sigma == pytest.approx(-2.0 * state.u + 0.7,
                                                abs=1e-12)

    def test_guards(self):
        d = data(1.0, 1.0)
        with pytest.raises(DegenerateTime):
            riemann_solution(d, 1.0, 0.0)
        with pytest.raises(ValueError):
            riemann_solution(d, -0.1, 1.0)

    @pytest.mark.parametrize("v0,vb", [
        (1.0, 1.0), (-1.0, -1.0), (2.0, 0.5), (1.5, -1.0),
        (-0.5, -1.5), (0.2, 2.0), (1.0, 1.4),
    ])
    def test_matches_independent_closed_form(self, v0, vb):
        d = data(v0, vb)
        for x in (0.0, 0.3, 0.9, 1.7, 3.2):
            for t in (0.4, 1.0, 2.1):
                state, _ = riemann_solution(d, x, t)
                want = oracles.riemann_v(v0, vb, x, t)
                assert state.u - 1.0 == pytest.approx(want, abs=1e-14)


class TestSolveRiemannGrid:
    def test_matches_pointwise(self):
        d = data(0.2, 2.0)
        grid = Grid.regular(4.0, 2.0, 21, 9)
        out = solve_riemann(d, grid)
        for it in (0, 4, 8):
            for ix in (0, 10, 20):
                state, _ = riemann_solution(d, float(grid.x[ix]),
                                            float(grid.t[it]))
                assert out.u[it, ix] == state.u
                assert out.sigma[it, ix] == state.sigma

    def test_case_and_branch_labels(self):
        d = data(2.0, 0.5)
        grid = Grid.regular(4.0, 1.0, 41, 4)
        out = solve_riemann(d, grid)
        assert set(np.unique(out.case)) == {"C3"}
        tm, xm = np.meshgrid(grid.t, grid.x, indexing="ij")
        assert np.all(out.branch[xm < 0.5 * tm] == "left")
        assert np.all(out.branch[xm > 2.0 * tm] == "right")
        inside = (xm > 0.5 * tm) & (xm < 2.0 * tm)
        assert np.all(out.branch[inside] == "fan")

    def test_threshold_mask(self):
        d = data(0.2, 2.0)  # s = 1.1
        x = np.array([0.0, 1.1, 2.2, 3.0])
        t = np.array([1.0, 2.0])
        out = solve_riemann(d, Grid(x, t))
        mask = out.meta["on_threshold"]
        assert mask[0].tolist() == [False, True, False, False]
        assert mask[1].tolist() == [False, False, True, False]

    def test_rejects_t0_rows(self):
        grid = Grid.regular(1.0, 1.0, 5, 5, include_t0=True)
        with pytest.raises(DegenerateTime):
            solve_riemann(data(1.0, 1.0), grid)

    def test_invariants_consistent(self):
        d = RiemannData(ModelConstants(k=0.5, j=1, c=1.0), u0=2.0, ub=0.9)
        out = solve_riemann(d, Grid.regular(2.0, 1.0, 11, 5))
        np.testing.assert_allclose(out.w1, out.sigma - 0.5 * out.u,
                                   atol=1e-14)
        np.testing.assert_allclose(out.w2, out.sigma + 0.5 * out.u,
                                   atol=1e-14)
