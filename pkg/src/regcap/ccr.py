"""
Counterparty credit risk capital: risk weights, effective maturity and the
capital charge on exposure at default.
"""

import math
from typing import Sequence, Union

import numpy as np
from scipy.stats import norm

from src.config import CAPITAL_RATIO, PD_FLOOR

# 99.9% quantile used by the IRB formula
_IRB_CONFIDENCE = 0.999


def irb_weight(pd: float, lgd: float, maturity: float) -> float:
    """
    Capital per unit of EAD under the internal ratings-based approach.

    Args:
        pd: One-year probability of default, floored at 0.03%
        lgd: Loss given default
        maturity: Effective maturity, clamped to [1, 5] years

    Returns:
        K such that RWA = K * 12.5 * EAD

    Raises:
        ValueError: if lgd is outside [0, 1] or pd is outside (0, 1)
    """
    if not 0.0 <= lgd <= 1.0:
        raise ValueError(f"LGD must lie in [0, 1], got {lgd}")
    if not 0.0 < pd < 1.0:
        raise ValueError(f"PD must lie in (0, 1), got {pd}")

    pd = max(pd, PD_FLOOR)
    maturity = min(5.0, max(1.0, maturity))

    f = (1.0 - math.exp(-50.0 * pd)) / (1.0 - math.exp(-50.0))
    rho = 0.12 * f + 0.24 * (1.0 - f)
    b = (0.11852 - 0.05478 * math.log(pd)) ** 2
    conditional_pd = norm.cdf(
        (norm.ppf(pd) + math.sqrt(rho) * norm.ppf(_IRB_CONFIDENCE)) / math.sqrt(1.0 - rho)
    )
    return lgd * (conditional_pd - pd) * (1.0 + (maturity - 2.5) * b) / (1.0 - 1.5 * b)


def standardized_capital_weight(risk_weight: float) -> float:
    """
    Express an external-rating risk weight in the IRB capital-weight form.

    With RWA = w * 12.5 * EAD, a risk weight RW (RWA = RW * EAD) corresponds
    to w = RW / 12.5.
    """
    if risk_weight < 0.0:
        raise ValueError(f"Risk weight must be non-negative, got {risk_weight}")
    return risk_weight / 12.5


def _weighted_maturity(maturities: Sequence[float], notionals: Sequence[float]) -> float:
    if len(maturities) != len(notionals):
        raise ValueError("effective maturity needs one notional per maturity")
    total = float(np.sum(notionals))
    if total <= 0.0:
        raise ValueError("Effective maturity of a netting set with zero total notional")
    return float(np.dot(maturities, notionals)) / total


def effective_maturity_irb(maturities: Sequence[float], notionals: Sequence[float]) -> float:
    """Notional-weighted residual maturity clamped to [1, 5] years."""
    return min(5.0, max(1.0, _weighted_maturity(maturities, notionals)))


def effective_maturity_cva(maturities: Sequence[float], notionals: Sequence[float]) -> float:
    """Notional-weighted residual maturity floored at 1 year, not capped."""
    return max(1.0, _weighted_maturity(maturities, notionals))


def ccr_capital(
    ead: Union[float, np.ndarray],
    weight: Union[float, np.ndarray],
    capital_ratio: float = CAPITAL_RATIO,
) -> Union[float, np.ndarray]:
    """
    K_CCR = c * 12.5 * w * EAD.

    Raises:
        ValueError: if any EAD is negative
    """
    if np.any(np.asarray(ead) < 0.0):
        raise ValueError(f"EAD must be non-negative, got {ead}")
    return capital_ratio * 12.5 * weight * ead
