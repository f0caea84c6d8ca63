"""
Regulatory lookup tables: the maturity-method ladder of the standardized
market-risk approach.
"""

from dataclasses import dataclass
from typing import Tuple

# Coupons below this rate are slotted with the low-coupon column
LOW_COUPON_THRESHOLD = 0.03

VERTICAL_DISALLOWANCE = 0.10
HORIZONTAL_DISALLOWANCE = {1: 0.40, 2: 0.30, 3: 0.30}
ADJACENT_ZONE_DISALLOWANCE = 0.40
ZONE_1_3_DISALLOWANCE = 1.00

_MONTH = 1.0 / 12.0
_INF = float("inf")


@dataclass(frozen=True)
class LadderBand:
    """Time band [lower, upper) in years of residual maturity."""
    lower: float
    upper: float
    weight: float
    zone: int

    def contains(self, maturity: float) -> bool:
        return self.lower <= maturity < self.upper


# Coupon of 3% or more
HIGH_COUPON_BANDS: Tuple[LadderBand, ...] = (
    LadderBand(0.0, _MONTH, 0.0000, 1),
    LadderBand(_MONTH, 3 * _MONTH, 0.0020, 1),
    LadderBand(3 * _MONTH, 6 * _MONTH, 0.0040, 1),
    LadderBand(6 * _MONTH, 1.0, 0.0070, 1),
    LadderBand(1.0, 2.0, 0.0125, 2),
    LadderBand(2.0, 3.0, 0.0175, 2),
    LadderBand(3.0, 4.0, 0.0225, 2),
    LadderBand(4.0, 5.0, 0.0275, 3),
    LadderBand(5.0, 7.0, 0.0325, 3),
    LadderBand(7.0, 10.0, 0.0375, 3),
    LadderBand(10.0, 15.0, 0.0450, 3),
    LadderBand(15.0, 20.0, 0.0525, 3),
    LadderBand(20.0, _INF, 0.0600, 3),
)

# Coupon below 3%
LOW_COUPON_BANDS: Tuple[LadderBand, ...] = (
    LadderBand(0.0, _MONTH, 0.0000, 1),
    LadderBand(_MONTH, 3 * _MONTH, 0.0020, 1),
    LadderBand(3 * _MONTH, 6 * _MONTH, 0.0040, 1),
    LadderBand(6 * _MONTH, 1.0, 0.0070, 1),
    LadderBand(1.0, 1.9, 0.0125, 2),
    LadderBand(1.9, 2.8, 0.0175, 2),
    LadderBand(2.8, 3.6, 0.0225, 2),
    LadderBand(3.6, 4.3, 0.0275, 3),
    LadderBand(4.3, 5.7, 0.0325, 3),
    LadderBand(5.7, 7.3, 0.0375, 3),
    LadderBand(7.3, 9.3, 0.0450, 3),
    LadderBand(9.3, 10.6, 0.0525, 3),
    LadderBand(10.6, 12.0, 0.0600, 3),
    LadderBand(12.0, 20.0, 0.0800, 3),
    LadderBand(20.0, _INF, 0.1250, 3),
)

# Rows of the two columns line up: row k carries the same weight and zone in both.
N_ZONES = 3


def band_for(maturity: float, coupon: float) -> Tuple[int, LadderBand]:
    """
    Ladder row of a position. Low-coupon positions use the low-coupon column
    of maturity boundaries; the row index is shared by both columns.

    Raises:
        ValueError: negative or non-finite residual maturity
    """
    bands = LOW_COUPON_BANDS if coupon < LOW_COUPON_THRESHOLD else HIGH_COUPON_BANDS
    for idx, band in enumerate(bands):
        if band.contains(maturity):
            return idx, band
    raise ValueError(f"No maturity band for residual maturity {maturity}")
