import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from rvfl_gmra.domain import CompactDomain
from rvfl_gmra.montecarlo import (
    almost_sure_bound,
    bennett_bound,
    loglog_slope,
    mc_integrate,
    mc_trials,
    mc_variance,
    tail_frequencies,
    verify_mse_law,
)


def ident(x):
    return x[:, 0]


def const(c):
    return lambda x: np.full(x.shape[0], c)


class TestIntegrate:
    @pytest.mark.parametrize("n", [1, 7, 1000])
    def test_constant_exact(self, n):
        K = CompactDomain.box([[0, 2], [-1, 0.5]])
        est = mc_integrate(const(1.5), K, n, 0)
        assert est.value == pytest.approx(1.5 * 3.0, rel=1e-15)
        assert est.variance_est == 0.0

    def test_identity_clt(self, unit_interval):
        n = 100_000
        est = mc_integrate(ident, unit_interval, n, 1)
        assert abs(est.value - 0.5) <= 3 * math.sqrt(1 / 12) / math.sqrt(n)
        assert est.variance_est == pytest.approx(1 / 12 / n, rel=0.02)

    def test_determinism(self, unit_interval):
        assert mc_integrate(ident, unit_interval, 50, 4).value == mc_integrate(ident, unit_interval, 50, 4).value

    def test_ball(self):
        # integral of |x|^2 over the unit disc is pi/2
        K = CompactDomain.ball([0, 0], 1.0)
        est = mc_integrate(lambda x: np.sum(x * x, axis=1), K, 200_000, 0)
        assert est.value == pytest.approx(math.pi / 2, abs=4 * math.sqrt(est.variance_est))

    def test_rejects_empty(self, unit_interval):
        with pytest.raises(ValueError):
            mc_integrate(ident, unit_interval, 0, 0)

    def test_unbiased_over_seeds(self, unit_interval):
        n = 200
        vals = np.array([mc_integrate(ident, unit_interval, n, s).value for s in range(1000)])
        se = math.sqrt(1 / 12 / n) / math.sqrt(1000)
        assert abs(vals.mean() - 0.5) <= 4 * se


class TestVariance:
    def test_constant(self, unit_interval):
        assert mc_variance(const(3.0), unit_interval, 1000, 0) == 0.0

    def test_identity(self, unit_interval):
        assert mc_variance(ident, unit_interval, 100_000, 0) == pytest.approx(1 / 12, rel=0.05)

    @given(c=st.floats(-1e3, 1e3))
    @settings(max_examples=30)
    def test_shift_invariant(self, c):
        K = CompactDomain.box([[0, 1]])
        a = mc_variance(ident, K, 5000, 2)
        b = mc_variance(lambda x: x[:, 0] + c, K, 5000, 2)
        assert b == pytest.approx(a, rel=1e-9, abs=1e-12)

    def test_nonnegative(self, unit_interval):
        assert mc_variance(lambda x: np.sin(40 * x[:, 0]), unit_interval, 10, 0) >= 0.0


class TestTrials:
    def test_rows_independent_of_count(self, unit_interval):
        a = mc_trials(ident, unit_interval, 10, 5, 0)
        b = mc_trials(ident, unit_interval, 10, 8, 0)
        np.testing.assert_array_equal(a, b[:5])

    def test_distinct_streams_per_n(self, unit_interval):
        assert not np.array_equal(mc_trials(ident, unit_interval, 10, 3, 0)[0], mc_trials(ident, unit_interval, 11, 3, 0)[0])


class TestMSELaw:
    def test_constant_zero_mse(self, unit_interval):
        rows = verify_mse_law(const(2.0), unit_interval, [10, 100], 50, 0, exact=2.0, sigma_sq=0.0)
        assert all(r.mse_emp == 0.0 for r in rows)

    def test_ratio_near_one(self, unit_interval):
        (row,) = verify_mse_law(ident, unit_interval, [1000], 10_000, 0, exact=0.5, sigma_sq=1 / 12)
        assert row.mse_pred == pytest.approx(1 / 12 / 1000)
        assert 0.8 <= row.ratio <= 1.2

    def test_default_references(self, unit_interval):
        (row,) = verify_mse_law(ident, unit_interval, [100], 2000, 1, n_reference=200_000)
        assert 0.8 <= row.ratio <= 1.2

    def test_needs_two_trials(self, unit_interval):
        with pytest.raises(ValueError):
            verify_mse_law(ident, unit_interval, [10], 1, 0)

    def test_slope_helper(self):
        n = np.array([10, 100, 1000])
        assert loglog_slope(n, 3.0 / n) == pytest.approx(-1.0)


class TestBennett:
    def test_instance(self):
        b = bennett_bound(1000, 0.1, 1.0, 1.0, 1.0)
        assert b.raw == pytest.approx(2.17697147704446e-4, rel=1e-12)
        assert b.value == b.raw

    def test_small_t_is_vacuous(self):
        b = bennett_bound(10, 1e-12, 1.0, 1.0)
        assert b.raw == pytest.approx(3.0, rel=1e-9)
        assert b.value == 1.0

    @given(n=st.integers(1, 10_000), t=st.floats(1e-3, 1.0))
    def test_decreasing_in_n(self, n, t):
        a = bennett_bound(n, t, 0.5, 0.1).raw
        b = bennett_bound(n + 1, t, 0.5, 0.1).raw
        assert b < a or a == 0.0

    def test_arguments(self):
        with pytest.raises(ValueError):
            bennett_bound(10, 0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            bennett_bound(10, 0.1, 0.0, 1.0)
        assert bennett_bound(10, 0.1, 1.0, 0.0).value == 0.0

    def test_almost_sure_bound(self, unit_interval):
        assert almost_sure_bound(ident, unit_interval, 0.5, 100_000, 0) == pytest.approx(0.5, abs=1e-4)

    def test_tail_frequencies(self):
        np.testing.assert_array_equal(tail_frequencies([0.0, 0.1, -0.3, 0.5], 0.0, [0.05, 0.2, 1.0]), [0.75, 0.5, 0.0])

    def test_empirical_tails_respect_doubled_constant(self, unit_interval):
        # c = 2 makes the bound provable from the classical Bennett inequality
        n, trials = 100, 5000
        est = mc_trials(ident, unit_interval, n, trials, 3)
        Kb = almost_sure_bound(ident, unit_interval, 0.5, 10_000, 0)
        for t in (0.01, 0.03, 0.1):
            bound = bennett_bound(n, t, Kb, 1 / 12, c=2.0).value
            k = int(np.sum(np.abs(est - 0.5) >= t))
            assert stats.binomtest(k, trials, bound, alternative="greater").pvalue >= 0.01
