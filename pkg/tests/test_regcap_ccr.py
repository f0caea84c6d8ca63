import math
from statistics import NormalDist

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.regcap.ccr import (
    ccr_capital,
    effective_maturity_cva,
    effective_maturity_irb,
    irb_weight,
    standardized_capital_weight,
)

STD_NORMAL = NormalDist()


def irb_by_hand(pd, lgd, maturity):
    pd = max(pd, 0.0003)
    maturity = min(5.0, max(1.0, maturity))
    f = (1.0 - math.exp(-50.0 * pd)) / (1.0 - math.exp(-50.0))
    rho = 0.12 * f + 0.24 * (1.0 - f)
    b = (0.11852 - 0.05478 * math.log(pd)) ** 2
    stressed = STD_NORMAL.cdf(
        (STD_NORMAL.inv_cdf(pd) + math.sqrt(rho) * STD_NORMAL.inv_cdf(0.999)) / math.sqrt(1.0 - rho)
    )
    return lgd * (stressed - pd) * (1.0 + (maturity - 2.5) * b) / (1.0 - 1.5 * b)


class TestIrbWeight:
    @given(st.floats(0.0003, 0.25), st.floats(0.1, 1.0), st.floats(0.5, 8.0))
    @settings(max_examples=30)
    def test_matches_hand_formula(self, pd, lgd, maturity):
        assert irb_weight(pd, lgd, maturity) == pytest.approx(irb_by_hand(pd, lgd, maturity), rel=1e-9)

    def test_pd_is_floored(self):
        assert irb_weight(0.0001, 0.45, 2.5) == irb_weight(0.0003, 0.45, 2.5)

    def test_maturity_is_clamped(self):
        assert irb_weight(0.01, 0.45, 0.2) == irb_weight(0.01, 0.45, 1.0)
        assert irb_weight(0.01, 0.45, 30.0) == irb_weight(0.01, 0.45, 5.0)

    def test_increases_with_pd(self):
        weights = [irb_weight(pd, 0.45, 2.5) for pd in (0.001, 0.01, 0.05)]
        assert weights == sorted(weights)

    @pytest.mark.parametrize("pd, lgd", [(0.0, 0.45), (1.0, 0.45), (0.01, -0.1), (0.01, 1.2)])
    def test_rejects_out_of_range(self, pd, lgd):
        with pytest.raises(ValueError):
            irb_weight(pd, lgd, 2.5)


class TestCcrCapital:
    def test_standardized_weight(self):
        assert standardized_capital_weight(1.0) == pytest.approx(0.08)

    def test_rejects_negative_risk_weight(self):
        with pytest.raises(ValueError):
            standardized_capital_weight(-0.5)

    def test_full_risk_weight_charges_capital_ratio(self):
        # c * 12.5 * (RW / 12.5) * EAD = c * RW * EAD
        assert ccr_capital(100.0, standardized_capital_weight(1.5), 0.08) == pytest.approx(12.0)

    def test_vectorised(self):
        result = ccr_capital(np.array([0.0, 10.0]), 0.08, 0.1)
        # 0.1 * 12.5 * 0.08 * 10
        np.testing.assert_allclose(result, [0.0, 1.0])

    def test_rejects_negative_ead(self):
        with pytest.raises(ValueError):
            ccr_capital(np.array([1.0, -1.0]), 0.08)


class TestEffectiveMaturity:
    def test_irb_caps_at_five_years(self):
        assert effective_maturity_irb([10.0], [1.0]) == 5.0

    def test_irb_floors_at_one_year(self):
        assert effective_maturity_irb([0.5], [1.0]) == 1.0

    def test_cva_is_not_capped(self):
        assert effective_maturity_cva([10.0], [1.0]) == 10.0
        assert effective_maturity_cva([0.25], [1.0]) == 1.0

    def test_notional_weighting(self):
        assert effective_maturity_cva([2.0, 8.0], [3.0, 1.0]) == pytest.approx(3.5)

    def test_zero_notional_rejected(self):
        with pytest.raises(ValueError):
            effective_maturity_irb([2.0], [0.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            effective_maturity_cva([2.0, 3.0], [1.0])
