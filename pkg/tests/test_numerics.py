"""Least squares and special function checks against independent oracles"""
import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from ccdbench.numerics import (
    ColumnLabel,
    DesignMatrix,
    NumericsException,
    f_cdf,
    f_quantile,
    ols_fit,
    regularized_incomplete_beta,
    shannon_entropy,
)
from ccdbench.signals import make_rng


def _design(values: np.ndarray) -> DesignMatrix:
    return DesignMatrix(values, tuple(ColumnLabel(0, lag) for lag in range(values.shape[1])))


class TestOlsFit:
    def test_matches_normal_equations(self):
        rng = make_rng(1)
        for _ in range(100):
            n = int(rng.integers(20, 200))
            p = int(rng.integers(1, 10))
            values = rng.normal(size=(n, p))
            y = rng.normal(size=n)
            fit = ols_fit(_design(values), y)
            oracle = np.linalg.solve(values.T @ values, values.T @ y)
            np.testing.assert_allclose(fit.coefficients, oracle, rtol=0, atol=1e-8)
            assert fit.rank == p
            residual = y - values @ oracle
            assert fit.rss == pytest.approx(float(residual @ residual), rel=1e-9)

    def test_redundant_column_gets_zero_weight(self):
        rng = make_rng(2)
        values = rng.normal(size=(100, 3))
        duplicated = np.column_stack([values, values[:, 0]])
        y = rng.normal(size=100)
        full = ols_fit(_design(duplicated), y)
        reduced = ols_fit(_design(values), y)
        assert full.rank == 3
        assert np.count_nonzero(full.coefficients) == 3
        assert full.rss == pytest.approx(reduced.rss, rel=1e-9)

    def test_exact_fit_has_zero_residual(self):
        values = np.column_stack([np.ones(10), np.arange(10.0)])
        fit = ols_fit(_design(values), 3.0 + 2.0 * np.arange(10.0))
        np.testing.assert_allclose(fit.coefficients, [3.0, 2.0], atol=1e-12)
        assert fit.rss == pytest.approx(0.0, abs=1e-18)

    def test_nested_designs_never_raise_rss(self):
        rng = make_rng(3)
        values = rng.normal(size=(200, 8))
        y = values[:, 0] + rng.normal(size=200)
        previous = math.inf
        for width in range(1, 9):
            rss = ols_fit(_design(values[:, :width]), y).rss
            assert rss <= previous + 1e-9
            previous = rss

    def test_rejects_wide_design(self):
        with pytest.raises(NumericsException):
            _design(np.ones((3, 3)))

    def test_rejects_mismatched_target(self):
        with pytest.raises(NumericsException):
            ols_fit(_design(np.eye(4)[:, :2]), np.ones(3))

    def test_rejects_non_finite_design(self):
        values = np.ones((5, 2))
        values[1, 1] = np.nan
        with pytest.raises(NumericsException):
            _design(values)


class TestIncompleteBeta:
    @pytest.mark.parametrize("a", np.linspace(1.0, 10.0, 10))
    def test_matches_quadrature(self, a):
        for b in np.linspace(1.0, 10.0, 10):
            for x in np.linspace(0.05, 0.95, 10):
                integral, _ = integrate.quad(
                    lambda t: t ** (a - 1.0) * (1.0 - t) ** (b - 1.0), 0.0, x, epsabs=0.0, epsrel=1e-12, limit=200
                )
                expected = integral / special.beta(a, b)
                assert regularized_incomplete_beta(x, a, b) == pytest.approx(expected, abs=1e-10)

    def test_matches_scipy_for_small_shapes(self):
        for a, b, x in [(0.5, 0.5, 0.3), (0.5, 20.0, 0.01), (30.0, 0.7, 0.99), (2.5, 100.0, 0.02)]:
            assert regularized_incomplete_beta(x, a, b) == pytest.approx(special.betainc(a, b, x), abs=1e-11)

    def test_endpoints(self):
        assert regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0
        assert regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0
        assert regularized_incomplete_beta(0.5, 4.0, 4.0) == 0.5

    @pytest.mark.parametrize("x, a, b", [(-0.1, 1.0, 1.0), (1.1, 1.0, 1.0), (0.5, 0.0, 1.0), (0.5, 1.0, -2.0)])
    def test_domain(self, x, a, b):
        with pytest.raises(NumericsException):
            regularized_incomplete_beta(x, a, b)


class TestFDistribution:
    @pytest.mark.parametrize("d", [1, 2, 5, 10, 100])
    def test_median_with_equal_dof_is_one(self, d):
        assert f_quantile(0.5, d, d) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("d1, d2", [(1, 1), (1, 30), (5, 2), (5, 9984), (50, 19849), (100, 100)])
    def test_cdf_inverts_quantile(self, d1, d2):
        for p in (0.001, 0.05, 0.5, 0.9, 0.999):
            assert f_cdf(f_quantile(p, d1, d2), d1, d2) == pytest.approx(p, abs=1e-9)

    @pytest.mark.parametrize("d1, d2", [(1, 10), (5, 9984), (20, 300)])
    def test_quantile_matches_scipy(self, d1, d2):
        assert f_quantile(0.999, d1, d2) == pytest.approx(stats.f.ppf(0.999, d1, d2), rel=1e-7)

    @pytest.mark.parametrize(
        "d1, d2, p", [(1, 1, 1.0 - 1e-10), (1, 1, 1.0 - 1e-12), (5, 2, 1.0 - 1e-9), (3, 40, 1e-12)]
    )
    def test_extreme_levels_match_scipy(self, d1, d2, p):
        quantile = f_quantile(p, d1, d2)
        assert math.isfinite(quantile)
        assert quantile == pytest.approx(stats.f.ppf(p, d1, d2), rel=1e-6)

    def test_upper_tail_is_monotone(self):
        levels = [0.9, 0.999, 1.0 - 1e-6, 1.0 - 1e-10]
        quantiles = [f_quantile(p, 1, 1) for p in levels]
        assert quantiles == sorted(quantiles)

    def test_cdf_matches_scipy(self):
        for q in (0.1, 1.0, 3.5, 20.0):
            assert f_cdf(q, 4, 17) == pytest.approx(stats.f.cdf(q, 4, 17), abs=1e-12)

    def test_cdf_limits(self):
        assert f_cdf(0.0, 3, 3) == 0.0
        assert f_cdf(math.inf, 3, 3) == 1.0

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5])
    def test_quantile_domain(self, p):
        with pytest.raises(NumericsException):
            f_quantile(p, 2, 2)


class TestShannonEntropy:
    def test_fair_coin_is_one_bit(self):
        assert shannon_entropy([10, 10]) == pytest.approx(1.0)

    def test_point_mass_is_zero(self):
        assert shannon_entropy([7, 0, 0]) == 0.0

    def test_uniform_four(self):
        assert shannon_entropy([3, 3, 3, 3]) == pytest.approx(2.0)

    def test_known_value(self):
        assert shannon_entropy([3, 1]) == pytest.approx(0.811278, abs=1e-6)

    def test_permutation_invariant(self):
        assert shannon_entropy([5, 1, 9, 2]) == pytest.approx(shannon_entropy([9, 2, 1, 5]), abs=1e-15)

    def test_uniform_is_maximal(self):
        rng = make_rng(4)
        for _ in range(50):
            counts = rng.integers(0, 20, size=6)
            if counts.sum() == 0:
                continue
            assert shannon_entropy(counts) <= math.log2(6) + 1e-12

    def test_empty_histogram(self):
        with pytest.raises(NumericsException):
            shannon_entropy([0, 0])
