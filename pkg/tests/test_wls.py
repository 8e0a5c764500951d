import numpy as np
import pytest

from conftest import A1_WEIGHTS, A2_EXACT_OBJECTIVE, A2_EXACT_RAW_MULTIPLIER, A2_EXACT_WEIGHTS, random_prms
from igmahp import (
    OptimizerConfig,
    ValidationError,
    finite_diff_gradient,
    kkt_residual,
    ligm,
    optimize_wls,
    pigm,
    wls_objective,
)
from igmahp.errors import DimensionMismatch


class TestOptimizer:
    def test_a1_from_uniform(self, a1):
        res = optimize_wls(a1, OptimizerConfig(seed=3))
        np.testing.assert_allclose(res.weights.weights, A1_WEIGHTS, atol=1e-4)
        assert res.objective < 1e-12
        assert not res.budget_exhausted

    def test_all_ones(self):
        res = optimize_wls(np.ones((3, 3)))
        np.testing.assert_allclose(res.weights.weights, 1 / 3, atol=1e-8)
        assert res.objective < 1e-15

    def test_a2_objective(self, a2):
        res = optimize_wls(a2, OptimizerConfig(seed=1))
        assert res.objective == pytest.approx(A2_EXACT_OBJECTIVE, rel=1e-6)
        assert res.objective >= wls_objective(a2, pigm(a2).w) - 1e-15
        np.testing.assert_allclose(res.weights.weights, A2_EXACT_WEIGHTS, atol=1e-6)

    def test_feasible_and_deterministic(self):
        for prm in random_prms(10, seed=20):
            cfg = OptimizerConfig(seed=9, max_evaluations=50_000)
            a, b = optimize_wls(prm, cfg), optimize_wls(prm, cfg)
            np.testing.assert_array_equal(a.weights.weights, b.weights.weights)
            assert a.weights.weights.sum() == pytest.approx(1, abs=1e-12)
            assert np.all(a.weights.weights > 0)

    def test_agrees_with_closed_form_from_uniform_start(self):
        for prm in random_prms(15, seed=21):
            res = optimize_wls(prm, OptimizerConfig(seed=2))
            assert not res.budget_exhausted
            np.testing.assert_allclose(res.weights.weights, pigm(prm).w, atol=1e-5)

    def test_budget_exhausted_is_a_flag(self, a2):
        res = optimize_wls(a2, OptimizerConfig(max_evaluations=40))
        assert res.budget_exhausted
        assert res.evaluations <= 40
        assert res.weights.weights.sum() == pytest.approx(1, abs=1e-12)

    def test_initial_point_checks(self, a2):
        with pytest.raises(DimensionMismatch):
            optimize_wls(a2, OptimizerConfig(initial_point=[0.5, 0.5]))
        with pytest.raises(ValidationError):
            optimize_wls(a2, OptimizerConfig(initial_point=[1, 0, 0, 0, 0, 0]))

    def test_config_validation(self):
        with pytest.raises(ValidationError):
            OptimizerConfig(max_evaluations=0)
        with pytest.raises(ValidationError):
            OptimizerConfig(tolerance=0)


class TestKKT:
    def test_a1_at_ligm(self, a1):
        res = ligm(a1, 0)
        k = kkt_residual(a1, res.w, res.multiplier)
        assert np.max(np.abs(k.stationarity)) < 1e-8
        assert abs(k.feasibility) < 1e-10

    def test_a2_published_multiplier(self, a2):
        # -1.633 is the multiplier of the bordered system built on Gbar + 1
        k = kkt_residual(a2, ligm(a2, 1).w, -1.633, shift=1.0)
        assert np.max(np.abs(k.stationarity)) < 1e-3
        assert abs(k.feasibility) < 1e-10

    def test_a2_unshifted_multiplier(self, a2):
        k = kkt_residual(a2, A2_EXACT_WEIGHTS, A2_EXACT_RAW_MULTIPLIER / 2)
        assert np.max(np.abs(k.stationarity)) < 1e-12

    def test_uniform_not_stationary(self, a1):
        k = kkt_residual(a1, np.full(4, 0.25), 0.0)
        assert np.max(np.abs(k.stationarity)) > 0.1

    def test_dimension(self, a1):
        with pytest.raises(DimensionMismatch):
            kkt_residual(a1, [0.5, 0.5], 0.0)


class TestFiniteDifferences:
    def test_matches_twice_kkt(self, a2):
        rng = np.random.default_rng(0)
        for _ in range(50):
            w = rng.dirichlet(np.ones(6))
            lam = rng.uniform(-2, 2)
            fd = finite_diff_gradient(a2, w, lam)
            analytic = 2 * kkt_residual(a2, w, lam).stationarity
            np.testing.assert_allclose(fd, analytic, rtol=1e-5, atol=1e-6)

    def test_zero_at_solution(self, a1):
        res = ligm(a1, 0)
        assert np.max(np.abs(finite_diff_gradient(a1, res.w, res.multiplier))) < 1e-6

    def test_step_refinement(self, a2):
        # The Lagrangian is quadratic, so central differences carry no
        # truncation term: halving h changes nothing beyond rounding noise.
        w = np.array([0.3, 0.1, 0.05, 0.15, 0.25, 0.15])
        exact = 2 * kkt_residual(a2, w, -0.4).stationarity
        for h in (1e-2, 5e-3, 1e-3, 1e-4, 1e-5):
            err = np.max(np.abs(finite_diff_gradient(a2, w, -0.4, h) - exact))
            assert err < 1e-13 / h + 1e-12

    def test_rejects_bad_step(self, a1):
        with pytest.raises(ValidationError):
            finite_diff_gradient(a1, A1_WEIGHTS, 0.0, h=0)


def test_closed_form_dominates_random_points():
    rng = np.random.default_rng(1)
    for prm in random_prms(20, seed=22):
        w = pigm(prm).w
        best = wls_objective(prm, w)
        for _ in range(200):
            p = rng.dirichlet(np.ones(prm.n))
            assert wls_objective(prm, p) >= best
