import numpy as np
import pytest

from portes.errors import EmptyOrder, NonStationary, RankDeficient
from portes.innovations import InnovationSource
from portes.models import (
    INVERTQ_WARNING,
    Admissibility,
    as_coeffs,
    companion,
    fit_var,
    innovation_source_for,
    invertq,
    simulate_fitted,
    var_filter,
)
from portes.varima import VarimaSpec, varima_sim

VAR2 = [[[0.5, 0.1], [0.4, 0.5]], [[0, 0], [0.3, 0]]]
VMA1_3 = [[[0.5, 0, 0], [0.1, 0.1, 0.3], [0, 0.2, 0.3]]]
SIZE_PHI = np.array([[0.3, 0.5], [0, 0.3]])


class TestCoeffs:
    def test_shapes(self):
        assert as_coeffs(None).shape == (0, 1, 1)
        assert as_coeffs([0.5, 0.2]).shape == (2, 1, 1)
        assert as_coeffs(np.eye(2)).shape == (1, 2, 2)
        assert as_coeffs(VAR2).shape == (2, 2, 2)

    def test_mismatched_k(self):
        with pytest.raises(ValueError):
            as_coeffs(np.eye(2), k=3)


class TestCompanion:
    def test_scalar(self):
        np.testing.assert_array_equal(companion([0.5]), [[0.5]])

    def test_univariate(self):
        np.testing.assert_array_equal(companion([0.7, -0.3, 0.6]), [[0.7, -0.3, 0.6], [1, 0, 0], [0, 1, 0]])

    def test_block_layout(self):
        c = companion(VAR2)
        np.testing.assert_array_equal(c[:2], np.hstack(VAR2))
        np.testing.assert_array_equal(c[2:, :2], np.eye(2))
        np.testing.assert_array_equal(c[2:, 2:], np.zeros((2, 2)))

    def test_empty(self):
        with pytest.raises(EmptyOrder):
            companion([])


class TestInvertq:
    def test_unit_root_violates(self):
        assert invertq([0.7, -0.3, 0.6]) is Admissibility.VIOLATED

    def test_var2_admissible(self):
        assert invertq(VAR2) is Admissibility.ADMISSIBLE

    def test_vma1_admissible(self):
        assert invertq(VMA1_3)

    def test_varma_ma_violates(self):
        assert not invertq([[[0.9, 0.4], [0.3, 0.1]]])

    def test_empty_is_admissible(self):
        assert invertq(None)

    def test_warning(self):
        with pytest.warns(UserWarning, match="stationary/invertibility"):
            invertq([1.01], warn=True)
        assert "check stationary/invertibility condition !" == INVERTQ_WARNING


class TestFitVar:
    def test_exact_recursion(self):
        z = 0.5 ** np.arange(40)
        f = fit_var(z, 1, constant=False)
        assert f.coeffs[0, 0, 0] == pytest.approx(0.5, abs=1e-10)
        np.testing.assert_allclose(f.residuals, 0, atol=1e-12)

    def test_ar1_consistency(self):
        z = varima_sim(VarimaSpec(ar=[0.7]), 5000, rng=np.random.default_rng(3))
        f = fit_var(z, 1)
        assert abs(f.coeffs[0, 0, 0] - 0.7) < 0.05

    def test_bivariate_recovery(self):
        spec = VarimaSpec(ar=[SIZE_PHI], sigma=[[1, 0.5], [0.5, 1]])
        z = varima_sim(spec, 5000, rng=np.random.default_rng(4))
        f = fit_var(z, 1)
        assert np.all(np.abs(f.coeffs[0] - SIZE_PHI) < 0.05)
        assert f.residuals.shape == (4999, 2)
        np.testing.assert_allclose(f.sigma, f.residuals.T @ f.residuals / 4999)

    def test_trend_regressor(self, rng):
        t = np.arange(1, 301)
        z = 2 + 0.03 * t + rng.standard_normal(300)
        f = fit_var(z, 1, trend=True)
        assert f.include_trend and abs(f.trend_coef[0] - 0.03) < 0.01

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient):
            fit_var(np.ones(30), 1)

    def test_too_short(self):
        with pytest.raises(ValueError):
            fit_var(np.arange(4.0), 2)


class TestSimulateFitted:
    def test_white_noise(self):
        f = fit_var(np.random.default_rng(5).standard_normal(400), 1)
        f = type(f)(**{**f.__dict__, "coeffs": np.zeros((1, 1, 1)), "intercept": np.zeros(1), "sigma": np.eye(1)})
        z = simulate_fitted(f, None, 4000, np.random.default_rng(6))
        assert abs(np.dot(z[1:, 0], z[:-1, 0]) / 4000) < 3 / np.sqrt(4000)

    def test_fixed_point(self):
        phi = np.array([[[0.5]]])
        f = fit_var(np.random.default_rng(7).standard_normal(100), 1)
        mu = 4.0
        f = type(f)(**{**f.__dict__, "coeffs": phi, "intercept": np.array([mu * 0.5])})
        zero = InnovationSource("bootstrap", donor=np.zeros((5, 1)))
        z = simulate_fitted(f, zero, 50, np.random.default_rng(0))
        np.testing.assert_allclose(z, mu, atol=1e-12)

    def test_bootstrap_membership(self):
        f = fit_var(np.random.default_rng(8).standard_normal((200, 2)), 1)
        src = innovation_source_for(f, "bootstrap")
        draws = src.draw(300, np.random.default_rng(1))
        rows = {tuple(r) for r in f.residuals}
        assert all(tuple(r) in rows for r in draws)

    def test_shape_and_determinism(self):
        f = fit_var(np.random.default_rng(9).standard_normal((150, 2)), 2, trend=True)
        a = simulate_fitted(f, None, 150, np.random.default_rng(2))
        b = simulate_fitted(f, None, 150, np.random.default_rng(2))
        assert a.shape == (150, 2)
        np.testing.assert_array_equal(a, b)

    def test_non_stationary(self):
        f = fit_var(np.random.default_rng(10).standard_normal(100), 1)
        f = type(f)(**{**f.__dict__, "coeffs": np.array([[[1.2]]])})
        with pytest.raises(NonStationary):
            simulate_fitted(f, None, 10, np.random.default_rng(0))


class TestVarFilter:
    def test_univariate_matches_loop(self, rng):
        u = rng.standard_normal((50, 1))
        phi = np.array([[[0.4]], [[-0.2]]])
        z = var_filter(phi, u)
        ref = np.zeros(50)
        for t in range(50):
            ref[t] = u[t, 0] + sum(phi[i, 0, 0] * ref[t - i - 1] for i in range(2) if t - i - 1 >= 0)
        np.testing.assert_allclose(z[:, 0], ref, atol=1e-12)

    def test_multivariate_matches_loop(self, rng):
        u = rng.standard_normal((30, 2))
        phi = np.array(VAR2)
        z = var_filter(phi, u)
        ref = np.zeros((30, 2))
        for t in range(30):
            ref[t] = u[t] + sum(phi[i] @ ref[t - i - 1] for i in range(2) if t - i - 1 >= 0)
        np.testing.assert_allclose(z, ref, atol=1e-12)
