import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.regcap.cva_capital import (
    CvaCapitalInput,
    cva_capital_std_full,
    cva_capital_std_large_n,
    ead_discount_factor,
    regulatory_cs01,
    regulatory_cva,
)


def full_by_hand(names, horizon=1.0):
    terms = []
    for weight, maturity, ead, hedge_maturity, hedge in names:
        df = (1.0 - math.exp(-0.05 * maturity)) / (0.05 * maturity)
        terms.append(weight * (maturity * ead * df - hedge_maturity * hedge))
    systematic = (0.5 * sum(terms)) ** 2
    idiosyncratic = 0.75 * sum(x * x for x in terms)
    return 2.33 * math.sqrt(horizon) * math.sqrt(systematic + idiosyncratic)


name_strategy = st.tuples(
    st.sampled_from([0.007, 0.008, 0.01, 0.02, 0.03, 0.1]),
    st.floats(1.0, 20.0),
    st.floats(0.0, 1e7),
    st.floats(0.0, 5.0),
    st.floats(0.0, 1e6),
)


class TestStandardizedCharge:
    def test_discount_factor(self):
        assert ead_discount_factor(10.0) == pytest.approx((1.0 - math.exp(-0.5)) / 0.5)

    def test_discount_factor_needs_positive_maturity(self):
        with pytest.raises(ValueError):
            ead_discount_factor(0.0)

    @given(st.lists(name_strategy, min_size=1, max_size=6), st.floats(0.25, 2.0))
    @settings(max_examples=30)
    def test_full_formula(self, names, horizon):
        inputs = [CvaCapitalInput(*name) for name in names]
        expected = full_by_hand(names, horizon)
        assert cva_capital_std_full(inputs, horizon) == pytest.approx(expected, rel=1e-10, abs=1e-9)

    def test_empty_portfolio(self):
        assert cva_capital_std_full([]) == 0.0

    def test_rejects_non_positive_horizon(self):
        with pytest.raises(ValueError):
            cva_capital_std_full([CvaCapitalInput(0.02, 5.0, 100.0)], 0.0)

    def test_single_name_is_twice_large_n(self):
        full = cva_capital_std_full([CvaCapitalInput(0.02, 7.0, 1e6)])
        assert full == pytest.approx(2.0 * cva_capital_std_large_n(0.02, 7.0, 1e6), rel=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 10, 50, 150, 400])
    def test_large_n_ratio(self, n):
        names = [CvaCapitalInput(0.02, 10.0, 1e6)] * n
        full = cva_capital_std_full(names)
        additive = n * cva_capital_std_large_n(0.02, 10.0, 1e6)
        assert full / additive == pytest.approx(2.0 * math.sqrt(0.25 + 0.75 / n), rel=1e-12)

    def test_large_n_within_one_percent_for_many_names(self):
        names = [CvaCapitalInput(0.02, 10.0, 1e6)] * 150
        full = cva_capital_std_full(names)
        additive = 150 * cva_capital_std_large_n(0.02, 10.0, 1e6)
        assert abs(full / additive - 1.0) < 0.01

    def test_hedge_reduces_charge(self):
        naked = cva_capital_std_full([CvaCapitalInput(0.02, 5.0, 1e6)])
        hedged = cva_capital_std_full([CvaCapitalInput(0.02, 5.0, 1e6, 5.0, 5e5)])
        assert hedged < naked

    def test_large_n_profile(self):
        ead = np.array([0.0, 100.0, 200.0])
        np.testing.assert_allclose(
            cva_capital_std_large_n(0.02, 5.0, ead),
            1.165 * 0.02 * 5.0 * ead * ead_discount_factor(5.0),
        )


@pytest.fixture
def grid():
    times = np.linspace(0.0, 5.0, 11)
    return {
        "spreads": np.full(times.size, 0.02),
        "times": times,
        "ee": 1000.0 * np.sqrt(times) * (5.0 - times),
        "discount": np.exp(-0.03 * times),
    }


class TestRegulatoryCva:
    def test_matches_hand_sum(self, grid):
        lgd = 0.6
        s, t, e, d = grid["spreads"], grid["times"], grid["ee"], grid["discount"]
        expected = 0.0
        for i in range(1, t.size):
            pd = max(0.0, math.exp(-s[i - 1] * t[i - 1] / lgd) - math.exp(-s[i] * t[i] / lgd))
            expected += pd * 0.5 * (e[i - 1] * d[i - 1] + e[i] * d[i])
        assert regulatory_cva(s, t, lgd, e, d) == pytest.approx(lgd * expected, rel=1e-12)

    def test_zero_spread_means_zero_cva(self, grid):
        assert regulatory_cva(np.zeros(11), grid["times"], 0.6, grid["ee"], grid["discount"]) == 0.0

    def test_inverted_spreads_are_floored(self):
        # survival rises from t1 to t2; that interval contributes nothing
        result = regulatory_cva([0.05, 0.05, 0.001], [0.0, 1.0, 2.0], 0.6, [1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
        assert result == pytest.approx(0.6 * (1.0 - math.exp(-0.05 / 0.6)))

    def test_rejects_bad_lgd(self, grid):
        with pytest.raises(ValueError):
            regulatory_cva(grid["spreads"], grid["times"], 0.0, grid["ee"], grid["discount"])

    def test_rejects_mismatched_grids(self, grid):
        with pytest.raises(ValueError):
            regulatory_cva(grid["spreads"][:-1], grid["times"], 0.6, grid["ee"], grid["discount"])


class TestCs01:
    def test_matches_hand_formula(self, grid):
        s, t, e, d = grid["spreads"], grid["times"], grid["ee"], grid["discount"]
        i = 4
        expected = 1e-4 * t[i] * math.exp(-s[i] * t[i] / 0.6) * 0.5 * (e[i - 1] * d[i - 1] + e[i + 1] * d[i + 1])
        assert regulatory_cs01(s, t, 0.6, e, d, i) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("bucket", [0, 10])
    def test_boundary_buckets_rejected(self, grid, bucket):
        with pytest.raises(ValueError):
            regulatory_cs01(grid["spreads"], grid["times"], 0.6, grid["ee"], grid["discount"], bucket)

    def test_interior_sensitivities_are_positive(self, grid):
        s, t, e, d = grid["spreads"], grid["times"], grid["ee"], grid["discount"]
        assert all(regulatory_cs01(s, t, 0.6, e, d, i) > 0.0 for i in range(1, 10))
