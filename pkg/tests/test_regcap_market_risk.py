import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.constants import LegKind, SwapDirection
from src.instruments import SwapSpec
from src.regcap.market_risk import (
    LadderPosition,
    ladder_breakpoints,
    ladder_charge,
    ladder_positions,
    market_risk_breakdown,
    market_risk_std,
    next_fixing,
    offset_matched_positions,
    positions_for_swap,
)
from src.regcap.tables import HIGH_COUPON_BANDS, LOW_COUPON_BANDS, band_for

N = 1_000_000.0


def swap(rate, maturity=10.0, direction=SwapDirection.PAYER, notional=N, trade_id="T"):
    return SwapSpec(trade_id, "C", notional, rate, maturity, 2, direction)


class TestTables:
    def test_columns_share_rows(self):
        for high, low in zip(HIGH_COUPON_BANDS, LOW_COUPON_BANDS):
            assert high.weight == low.weight
            assert high.zone == low.zone

    def test_low_coupon_ten_years(self):
        idx, band = band_for(10.0, 0.027)
        assert band.weight == 0.0525 and band.zone == 3

    def test_high_coupon_ten_years(self):
        _, band = band_for(10.0, 0.03)
        assert band.weight == 0.045

    def test_negative_maturity_rejected(self):
        with pytest.raises(ValueError):
            band_for(-0.5, 0.02)


class TestFixings:
    @pytest.mark.parametrize("t, expected", [(0.0, 0.25), (0.1, 0.15), (0.3, 0.2), (0.5, 0.0), (0.6, 0.15)])
    def test_next_fixing(self, t, expected):
        assert next_fixing(t, 0.25, 0.25) == pytest.approx(expected, abs=1e-12)

    def test_positions_of_payer(self):
        fixed, floating = positions_for_swap(swap(0.027), 0.0)
        assert fixed.leg is LegKind.FIXED and fixed.amount == -N and fixed.maturity == 10.0
        assert floating.leg is LegKind.FLOATING and floating.amount == N
        assert floating.maturity == pytest.approx(0.25)

    def test_matured_swap_has_no_positions(self):
        assert positions_for_swap(swap(0.027), 10.0) == []

    def test_breakpoints(self):
        points = ladder_breakpoints([swap(0.027, maturity=2.0)], 2.0)
        for t in (0.0, 0.1, 0.25, 2.0 - 1.9, 1.0, 1.5, 2.0 - 1.0 / 12.0, 2.0):
            assert np.any(np.isclose(points, t)), t
        assert points.min() >= 0.0 and points.max() <= 2.0

    @given(st.floats(0.0, 1.9), st.floats(0.0, 1.0))
    @settings(max_examples=30)
    def test_charge_is_constant_between_breakpoints(self, a, fraction):
        trades = [swap(0.027, maturity=2.0), swap(0.035, maturity=1.5, direction=SwapDirection.RECEIVER)]
        points = np.union1d(ladder_breakpoints(trades, 2.0), [0.0, 2.0])
        k = np.searchsorted(points, a, side="right")
        lo, hi = points[k - 1], points[k]
        t1, t2 = lo + 1e-7 + 0.5 * fraction * (hi - lo - 2e-7), hi - 1e-7
        if t1 >= t2:
            return
        assert market_risk_std(trades, t1) == pytest.approx(market_risk_std(trades, t2), rel=1e-12)


class TestLadder:
    def test_single_ten_year_swap(self):
        # 5.25% short in zone 3 against 0.4% long in zone 1
        assert market_risk_std([swap(0.027)], 0.0) == pytest.approx(0.0525 * N, rel=1e-12)

    def test_single_swap_breakdown(self):
        breakdown = market_risk_breakdown([swap(0.027)], 0.0)
        assert breakdown.vertical == 0.0
        assert breakdown.horizontal == 0.0
        assert breakdown.net_open == pytest.approx(0.0485 * N)
        assert breakdown.zone_1_3 == pytest.approx(0.004 * N)
        assert breakdown.total == pytest.approx(0.0525 * N)

    def test_mirror_book_is_flat(self):
        trades = [swap(0.027), swap(0.027, direction=SwapDirection.RECEIVER, trade_id="H")]
        assert market_risk_std(trades, 0.0) == 0.0
        assert market_risk_std(trades, 4.3) == 0.0

    def test_close_coupons_are_offset(self):
        trades = [swap(0.027), swap(0.028, direction=SwapDirection.RECEIVER, trade_id="H")]
        assert ladder_positions(trades, 0.0) == []

    def test_distant_coupons_only_vertical(self):
        trades = [swap(0.027), swap(0.029, direction=SwapDirection.RECEIVER, trade_id="H")]
        breakdown = market_risk_breakdown(trades, 0.0)
        assert breakdown.vertical == pytest.approx(0.1 * (0.0525 + 0.004) * N)
        assert breakdown.total == pytest.approx(breakdown.vertical)

    def test_partial_offset_leaves_residual(self):
        trades = [swap(0.027), swap(0.027, direction=SwapDirection.RECEIVER, notional=0.25 * N, trade_id="H")]
        assert market_risk_std(trades, 0.0) == pytest.approx(0.75 * 0.0525 * N, rel=1e-12)

    def test_maturity_tolerance(self):
        a = LadderPosition(LegKind.FIXED, 5.0, 0.02, 100.0)
        b = LadderPosition(LegKind.FIXED, 5.0 + 20.0 / 365.0, 0.02, -100.0)
        c = LadderPosition(LegKind.FIXED, 5.0 + 40.0 / 365.0, 0.02, -100.0)
        assert offset_matched_positions([a, b]) == []
        assert len(offset_matched_positions([a, c])) == 2

    def test_legs_never_offset_each_other(self):
        a = LadderPosition(LegKind.FIXED, 0.25, 0.02, 100.0)
        b = LadderPosition(LegKind.FLOATING, 0.25, 0.02, -100.0)
        assert len(offset_matched_positions([a, b])) == 2

    def test_adjacent_zones(self):
        positions = [
            LadderPosition(LegKind.FIXED, 0.75, 0.05, 1000.0),   # zone 1, 0.70%
            LadderPosition(LegKind.FIXED, 1.5, 0.05, -1000.0),   # zone 2, 1.25%
        ]
        breakdown = ladder_charge(positions)
        assert breakdown.adjacent == pytest.approx(0.4 * 7.0)
        assert breakdown.net_open == pytest.approx(12.5 - 7.0)

    def test_empty_book(self):
        assert ladder_charge([]).total == 0.0

    @given(
        st.lists(
            st.tuples(
                st.floats(0.005, 0.06),
                st.floats(0.5, 25.0),
                st.sampled_from(list(SwapDirection)),
                st.floats(1e3, 1e7),
            ),
            min_size=1,
            max_size=4,
        ),
        st.floats(0.0, 0.4),
    )
    @settings(max_examples=30)
    def test_any_book_plus_its_mirror_is_flat(self, specs, t):
        book = [
            SwapSpec(f"T{i}", "C", notional, rate, maturity, 2, direction)
            for i, (rate, maturity, direction, notional) in enumerate(specs)
        ]
        mirrors = [spec.mirrored(f"M{i}", "C") for i, spec in enumerate(book)]
        assert market_risk_std(book + mirrors, t) == 0.0
