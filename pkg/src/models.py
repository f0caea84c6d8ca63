"""Shared domain records for the pricer"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from src.config import (
    COLLATERAL_SPREAD,
    DEFAULT_SEED,
    HW_MEAN_REVERSION,
    HW_VOLATILITY,
    ISSUER_RECOVERY,
    ISSUER_SPREAD,
)
from src.curve_model import DiscountCurve, HullWhiteModel


@dataclass(frozen=True)
class IssuerParams:
    """Credit and funding parameters of the bank itself."""
    funding_spread: float = ISSUER_SPREAD
    recovery: float = ISSUER_RECOVERY
    collateral_spread: float = COLLATERAL_SPREAD
    spread_is_lambda: bool = False

    def __post_init__(self):
        if not 0.0 <= self.recovery < 1.0:
            raise ValueError(f"Issuer recovery must lie in [0, 1), got {self.recovery}")
        if self.funding_spread < 0.0:
            raise ValueError(f"Issuer funding spread must be non-negative, got {self.funding_spread}")

    @property
    def hazard_rate(self) -> float:
        """lambda_B, either the quoted spread itself or spread / (1 - R_B)."""
        if self.spread_is_lambda:
            return self.funding_spread
        return self.funding_spread / (1.0 - self.recovery)

    @property
    def bond_spread(self) -> float:
        """(1 - R_B) * lambda_B."""
        return (1.0 - self.recovery) * self.hazard_rate


@dataclass(frozen=True)
class MarketEnvironment:
    """Everything market-side a pricing run needs."""
    curve: DiscountCurve
    mean_reversion: float = HW_MEAN_REVERSION
    volatility: float = HW_VOLATILITY
    issuer: IssuerParams = field(default_factory=IssuerParams)
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        HullWhiteModel(self.mean_reversion, self.volatility, self.curve)

    @property
    def model(self) -> HullWhiteModel:
        return HullWhiteModel(self.mean_reversion, self.volatility, self.curve)

    def shifted(self, bp: float) -> "MarketEnvironment":
        """Same environment with the zero curve shifted in parallel by `bp`."""
        return replace(self, curve=self.curve.shifted(bp))


@dataclass(frozen=True, eq=False)
class Moments:
    """
    Time profile of a pathwise quantity X(t) seen through three expectations.

    expected       E[X(t)]
    discounted     E[D(t) X(t)]
    rate_weighted  E[D(t) r(t) X(t)]
    stderr         standard error of the discounted estimate
    """
    expected: np.ndarray
    discounted: np.ndarray
    rate_weighted: np.ndarray
    stderr: Optional[np.ndarray] = None

    @classmethod
    def from_samples(
        cls,
        samples: np.ndarray,
        discount: np.ndarray,
        short_rate: np.ndarray,
    ) -> "Moments":
        """Moments of an (n_paths, n_times) sample matrix."""
        n = samples.shape[0]
        discounted = discount * samples
        stderr = discounted.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(samples.shape[1])
        return cls(
            expected=samples.mean(axis=0),
            discounted=discounted.mean(axis=0),
            rate_weighted=(discounted * short_rate).mean(axis=0),
            stderr=stderr,
        )

    @classmethod
    def zeros(cls, n_times: int) -> "Moments":
        z = np.zeros(n_times)
        return cls(z, z.copy(), z.copy(), z.copy())

    def scaled(self, factor) -> "Moments":
        """Multiply by a scalar or a deterministic time profile."""
        factor = np.asarray(factor, dtype=float)
        return Moments(
            expected=self.expected * factor,
            discounted=self.discounted * factor,
            rate_weighted=self.rate_weighted * factor,
            stderr=None if self.stderr is None else self.stderr * np.abs(factor),
        )

    def __add__(self, other: "Moments") -> "Moments":
        stderr = None
        if self.stderr is not None and other.stderr is not None:
            # upper bound; the two estimates share paths
            stderr = self.stderr + other.stderr
        return Moments(
            expected=self.expected + other.expected,
            discounted=self.discounted + other.discounted,
            rate_weighted=self.rate_weighted + other.rate_weighted,
            stderr=stderr,
        )
