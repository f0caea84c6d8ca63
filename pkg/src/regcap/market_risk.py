"""
Standardized general interest-rate market risk (maturity method).

Each swap is decomposed into a fixed-rate bond position and a floating-rate
note position. Closely matched opposite positions are removed, the rest are
slotted into the maturity ladder and charged with vertical, horizontal and
net-open-position components.
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.constants import LegKind
from src.instruments import SwapSpec
from src.logger import setup_logger
from src.regcap.tables import (
    ADJACENT_ZONE_DISALLOWANCE,
    HIGH_COUPON_BANDS,
    HORIZONTAL_DISALLOWANCE,
    LOW_COUPON_BANDS,
    N_ZONES,
    VERTICAL_DISALLOWANCE,
    ZONE_1_3_DISALLOWANCE,
    band_for,
)

logger = setup_logger(__name__)

# Closely matched swaps: coupon within 15bp
MATCH_COUPON_TOLERANCE = 0.0015
_DAY = 1.0 / 365.0


@dataclass(frozen=True)
class LadderPosition:
    """A bond-equivalent position; amount is signed (long positive)."""
    leg: LegKind
    maturity: float
    coupon: float
    amount: float


@dataclass(frozen=True)
class LadderBreakdown:
    """Components of the maturity-method charge, in currency units."""
    vertical: float = 0.0
    horizontal: float = 0.0
    adjacent: float = 0.0
    zone_1_3: float = 0.0
    net_open: float = 0.0

    @property
    def total(self) -> float:
        return self.vertical + self.horizontal + self.adjacent + self.zone_1_3 + self.net_open


def next_fixing(t: float, first_fixing: float, reset: float) -> float:
    """Time from t to the next floating fixing."""
    if t <= first_fixing:
        return first_fixing - t
    elapsed = (t - first_fixing) % reset
    if elapsed < 1e-9 or reset - elapsed < 1e-9:
        return 0.0
    return reset - elapsed


def positions_for_swap(
    spec: SwapSpec,
    t: float,
    first_fixing: float = 0.25,
    reset: float = 0.25,
) -> List[LadderPosition]:
    """Fixed and floating bond-equivalent positions of a swap at time t."""
    residual = spec.maturity - t
    if residual <= 1e-9:
        return []
    sign = spec.direction.sign
    float_maturity = min(next_fixing(t, first_fixing, reset), residual)
    return [
        LadderPosition(LegKind.FIXED, residual, spec.fixed_rate, -sign * spec.notional),
        LadderPosition(LegKind.FLOATING, float_maturity, spec.fixed_rate, sign * spec.notional),
    ]


def _maturity_tolerance(maturity: float) -> float:
    if maturity < 1.0 / 12.0:
        return 0.5 * _DAY
    if maturity <= 1.0:
        return 7.0 * _DAY
    return 30.0 * _DAY


def _closely_matched(a: LadderPosition, b: LadderPosition) -> bool:
    return (
        a.leg is b.leg
        and abs(a.coupon - b.coupon) <= MATCH_COUPON_TOLERANCE + 1e-12
        and abs(a.maturity - b.maturity) <= _maturity_tolerance(min(a.maturity, b.maturity))
    )


def _identical(a: LadderPosition, b: LadderPosition) -> bool:
    return a.leg is b.leg and a.coupon == b.coupon and abs(a.maturity - b.maturity) < 1e-12


def _offset_pass(remaining: List[list], matches) -> None:
    for i, (pos_i, _) in enumerate(remaining):
        for j in range(i + 1, len(remaining)):
            amount_i = remaining[i][1]
            pos_j, amount_j = remaining[j]
            if amount_i == 0.0:
                break
            if amount_j == 0.0 or np.sign(amount_i) == np.sign(amount_j):
                continue
            if not matches(pos_i, pos_j):
                continue
            matched = min(abs(amount_i), abs(amount_j))
            remaining[i][1] = amount_i - np.sign(amount_i) * matched
            remaining[j][1] = amount_j - np.sign(amount_j) * matched


def offset_matched_positions(positions: Sequence[LadderPosition]) -> List[LadderPosition]:
    """
    Net long and short positions against each other: identical positions
    first, then closely matched ones.
    """
    remaining = [[p, p.amount] for p in positions if p.amount != 0.0]
    _offset_pass(remaining, _identical)
    _offset_pass(remaining, _closely_matched)
    return [
        LadderPosition(p.leg, p.maturity, p.coupon, amount)
        for p, amount in remaining
        if abs(amount) > 1e-12 * max(1.0, abs(p.amount))
    ]


def _offset_zones(a: float, b: float, rate: float) -> Tuple[float, float, float]:
    """Offset two opposite-signed zone nets; returns (charge, residual a, residual b)."""
    if a * b >= 0.0:
        return 0.0, a, b
    matched = min(abs(a), abs(b))
    return rate * matched, a - np.sign(a) * matched, b - np.sign(b) * matched


def ladder_charge(positions: Sequence[LadderPosition]) -> LadderBreakdown:
    """
    Maturity-method charge of already-offset positions.

    Raises:
        ValueError: if a position cannot be mapped to a maturity band
    """
    if not positions:
        return LadderBreakdown()

    longs: Dict[int, float] = {}
    shorts: Dict[int, float] = {}
    zones: Dict[int, int] = {}
    for pos in positions:
        idx, band = band_for(pos.maturity, pos.coupon)
        zones[idx] = band.zone
        weighted = abs(pos.amount) * band.weight
        book = longs if pos.amount > 0 else shorts
        book[idx] = book.get(idx, 0.0) + weighted

    vertical = 0.0
    zone_long = {z: 0.0 for z in range(1, N_ZONES + 1)}
    zone_short = {z: 0.0 for z in range(1, N_ZONES + 1)}
    for idx, zone in zones.items():
        long_b, short_b = longs.get(idx, 0.0), shorts.get(idx, 0.0)
        vertical += VERTICAL_DISALLOWANCE * min(long_b, short_b)
        net_b = long_b - short_b
        if net_b > 0:
            zone_long[zone] += net_b
        else:
            zone_short[zone] -= net_b

    horizontal = 0.0
    zone_net = {}
    for zone in range(1, N_ZONES + 1):
        horizontal += HORIZONTAL_DISALLOWANCE[zone] * min(zone_long[zone], zone_short[zone])
        zone_net[zone] = zone_long[zone] - zone_short[zone]
    net_open = abs(sum(zone_net.values()))

    adj_12, n1, n2 = _offset_zones(zone_net[1], zone_net[2], ADJACENT_ZONE_DISALLOWANCE)
    adj_23, n2, n3 = _offset_zones(n2, zone_net[3], ADJACENT_ZONE_DISALLOWANCE)
    zone_1_3, _, _ = _offset_zones(n1, n3, ZONE_1_3_DISALLOWANCE)

    return LadderBreakdown(
        vertical=vertical,
        horizontal=horizontal,
        adjacent=adj_12 + adj_23,
        zone_1_3=zone_1_3,
        net_open=net_open,
    )


def ladder_positions(
    trades: Sequence[SwapSpec],
    t: float,
    first_fixing: float = 0.25,
    reset: float = 0.25,
) -> List[LadderPosition]:
    """Offset ladder positions of all live trades at time t."""
    positions: List[LadderPosition] = []
    for spec in trades:
        positions.extend(positions_for_swap(spec, t, first_fixing, reset))
    return offset_matched_positions(positions)


def market_risk_breakdown(
    trades: Sequence[SwapSpec],
    t: float,
    first_fixing: float = 0.25,
    reset: float = 0.25,
) -> LadderBreakdown:
    return ladder_charge(ladder_positions(trades, t, first_fixing, reset))


def market_risk_std(
    trades: Sequence[SwapSpec],
    t: float,
    first_fixing: float = 0.25,
    reset: float = 0.25,
) -> float:
    """Standardized market-risk capital of a trade set at time t, in currency units."""
    return market_risk_breakdown(trades, t, first_fixing, reset).total


def ladder_breakpoints(
    trades: Sequence[SwapSpec],
    horizon: float,
    first_fixing: float = 0.25,
    reset: float = 0.25,
) -> np.ndarray:
    """
    Times in [0, horizon] where a ladder position can change band, reset or
    expire. Between two consecutive breakpoints the charge is constant.
    """
    edges = np.unique([band.lower for band in LOW_COUPON_BANDS + HIGH_COUPON_BANDS])
    maturities = np.array([spec.maturity for spec in trades], dtype=float)
    fixings = first_fixing + reset * np.arange(int(np.ceil(max(horizon - first_fixing, 0.0) / reset)) + 2)
    points = np.concatenate((
        (maturities[:, None] - edges[None, :]).ravel(),
        (fixings[:, None] - edges[edges <= reset][None, :]).ravel(),
    ))
    return np.unique(points[(points >= 0.0) & (points <= horizon)])
