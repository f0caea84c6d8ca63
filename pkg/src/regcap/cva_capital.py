"""
CVA risk capital: the standardized charge (full and large-N forms) and the
advanced-method regulatory CVA with its bucket sensitivities.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from src.config import CVA_CONFIDENCE, CVA_HORIZON


@dataclass(frozen=True)
class CvaCapitalInput:
    """One counterparty of the standardized CVA charge."""
    weight: float                 # omega_i
    maturity: float               # M_i, years
    ead: float                    # undiscounted EAD
    hedge_maturity: float = 0.0   # M_i^hedge
    hedge_notional: float = 0.0   # B_i, single-name CDS hedge


def ead_discount_factor(maturity: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """(1 - exp(-0.05 M)) / (0.05 M), the supervisory EAD discounting."""
    m = np.asarray(maturity, dtype=float)
    if np.any(m <= 0.0):
        raise ValueError(f"Maturity must be positive, got {maturity}")
    result = -np.expm1(-0.05 * m) / (0.05 * m)
    return float(result) if result.ndim == 0 else result


def cva_capital_std_full(
    counterparties: Sequence[CvaCapitalInput],
    horizon: float = CVA_HORIZON,
) -> float:
    """Standardized CVA capital over all counterparties, without index hedges."""
    if horizon <= 0.0:
        raise ValueError(f"Horizon must be positive, got {horizon}")
    if not counterparties:
        return 0.0
    terms = np.array([
        cp.weight * (cp.maturity * cp.ead * ead_discount_factor(cp.maturity)
                     - cp.hedge_maturity * cp.hedge_notional)
        for cp in counterparties
    ])
    systematic = (0.5 * terms.sum()) ** 2
    idiosyncratic = 0.75 * np.sum(terms ** 2)
    return float(CVA_CONFIDENCE * np.sqrt(horizon) * np.sqrt(systematic + idiosyncratic))


def cva_capital_std_large_n(
    weight: float,
    maturity: Union[float, np.ndarray],
    ead: Union[float, np.ndarray],
    horizon: float = CVA_HORIZON,
) -> Union[float, np.ndarray]:
    """Per-counterparty additive approximation (2.33 / 2) * sqrt(h) * w * M * EAD_disc."""
    return (
        0.5 * CVA_CONFIDENCE * np.sqrt(horizon) * weight
        * maturity * np.asarray(ead) * ead_discount_factor(maturity)
    )


def _survival(spreads: np.ndarray, times: np.ndarray, lgd: float) -> np.ndarray:
    return np.exp(-spreads * times / lgd)


def _check_grids(*arrays: np.ndarray) -> None:
    sizes = {a.size for a in arrays}
    if len(sizes) != 1:
        raise ValueError(f"Mismatched grids: sizes {sorted(sizes)}")


def regulatory_cva(
    spreads: Sequence[float],
    times: Sequence[float],
    lgd: float,
    ee: Sequence[float],
    discount: Sequence[float],
) -> float:
    """
    Advanced-method CVA from market spreads and an EE profile.

    All inputs are aligned on t_0 = 0, t_1, ..., t_T.
    """
    if not 0.0 < lgd <= 1.0:
        raise ValueError(f"Market LGD must lie in (0, 1], got {lgd}")
    s, t, e, d = (np.asarray(a, dtype=float) for a in (spreads, times, ee, discount))
    _check_grids(s, t, e, d)
    survival = _survival(s, t, lgd)
    default_prob = np.maximum(0.0, survival[:-1] - survival[1:])
    exposure = 0.5 * (e[:-1] * d[:-1] + e[1:] * d[1:])
    return float(lgd * np.sum(default_prob * exposure))


def regulatory_cs01(
    spreads: Sequence[float],
    times: Sequence[float],
    lgd: float,
    ee: Sequence[float],
    discount: Sequence[float],
    bucket: int,
) -> float:
    """
    Regulatory CS01 of bucket i:
    0.0001 * t_i * exp(-s_i t_i / LGD) * (EE_{i-1} D_{i-1} + EE_{i+1} D_{i+1}) / 2.

    Raises:
        ValueError: for the first or last bucket, or mismatched grids
    """
    s, t, e, d = (np.asarray(a, dtype=float) for a in (spreads, times, ee, discount))
    _check_grids(s, t, e, d)
    if not 0 < bucket < s.size - 1:
        raise ValueError(f"CS01 bucket {bucket} must be interior to 0..{s.size - 1}")
    i = bucket
    neighbours = 0.5 * (e[i - 1] * d[i - 1] + e[i + 1] * d[i + 1])
    return float(1e-4 * t[i] * np.exp(-s[i] * t[i] / lgd) * neighbours)
