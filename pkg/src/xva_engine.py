"""
Valuation adjustments as time integrals over exposure and capital profiles.

Survival to time u is exp(-(lambda_B + lambda_C) u). With bilateral closeouts
at the risk-free value and the issuer funding through its own bond:

    CVA  = -(1 - R_C) lambda_C  int S(u) E[D V+] du
    DVA  = -(1 - R_B) lambda_B  int S(u) E[D V-] du
    FCA  = -(1 - R_B) lambda_B  int S(u) (E[D V+] - phi E[D K]) du
    COLVA = -s_X int S(u) E[D X] du
    KVA  = -int S(u) (gamma_K E[D K] - phi E[D r K]) du

The regrouped pair moves the capital-funding benefit into the capital term,
FCA' = -(1 - R_B) lambda_B int S E[D V+] and
KVA' = -int S (gamma_K E[D K] - phi E[D r_B K]) with r_B = r + (1 - R_B) lambda_B,
so that FCA + KVA = FCA' + KVA'.
"""

from dataclasses import dataclass, fields, replace
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from src.constants import Columns
from src.exposure import ExposureProfile
from src.logger import setup_logger
from src.models import IssuerParams
from src.regcap.profile import CapitalConfig, CapitalProfile, CounterpartyProfile

logger = setup_logger(__name__)

CAPITAL_COMPONENTS = ("mr", "ccr", "cva")


@dataclass(frozen=True)
class XvaBreakdown:
    """Valuation adjustments in bp of the reference notional; costs are negative."""
    phi: float
    notional: float
    cva: float = 0.0
    dva: float = 0.0
    fca: float = 0.0
    colva: float = 0.0
    kva_mr: float = 0.0
    kva_ccr: float = 0.0
    kva_cva: float = 0.0
    fca_prime: float = 0.0
    kva_prime_mr: float = 0.0
    kva_prime_ccr: float = 0.0
    kva_prime_cva: float = 0.0

    @property
    def kva(self) -> float:
        return self.kva_mr + self.kva_ccr + self.kva_cva

    @property
    def kva_prime(self) -> float:
        return self.kva_prime_mr + self.kva_prime_ccr + self.kva_prime_cva

    @property
    def total(self) -> float:
        return self.cva + self.dva + self.fca + self.colva + self.kva

    @property
    def total_prime(self) -> float:
        return self.cva + self.dva + self.fca_prime + self.colva + self.kva_prime

    @property
    def total_currency(self) -> float:
        return self.total * self.notional * 1e-4

    def __add__(self, other: "XvaBreakdown") -> "XvaBreakdown":
        if self.notional != other.notional or self.phi != other.phi:
            raise ValueError("Only breakdowns on the same reference notional and phi can be added")
        values = {
            f.name: getattr(self, f.name) + getattr(other, f.name)
            for f in fields(self)
            if f.name not in ("phi", "notional")
        }
        return XvaBreakdown(phi=self.phi, notional=self.notional, **values)

    def as_row(self) -> Dict[str, float]:
        """Table row in the regrouped presentation."""
        return {
            Columns.CVA: self.cva,
            Columns.DVA: self.dva,
            Columns.FCA: self.fca_prime,
            Columns.COLVA: self.colva,
            Columns.KVA_MR: self.kva_prime_mr,
            Columns.KVA_CCR: self.kva_prime_ccr,
            Columns.KVA_CVA: self.kva_prime_cva,
            Columns.KVA: self.kva_prime,
            Columns.TOTAL: self.total_prime,
        }


def survival(times: np.ndarray, lambda_b: float, lambda_c: float) -> np.ndarray:
    """Joint survival of issuer and counterparty."""
    return np.exp(-(lambda_b + lambda_c) * np.asarray(times, dtype=float))


def xva_integrals(
    times: Sequence[float],
    epe: np.ndarray,
    ene: np.ndarray,
    collateral: np.ndarray,
    capital_discounted: Mapping[str, np.ndarray],
    capital_rate_weighted: Mapping[str, np.ndarray],
    counterparty: CounterpartyProfile,
    issuer: IssuerParams,
    config: CapitalConfig,
) -> Dict[str, np.ndarray]:
    """
    Adjustment integrals in currency units.

    Profile arrays may carry leading axes (e.g. one row per path); integration
    runs over the last axis.
    """
    times = np.asarray(times, dtype=float)
    lambda_b, lambda_c = issuer.hazard_rate, counterparty.hazard_rate
    loss_b = (1.0 - issuer.recovery) * lambda_b
    loss_c = (1.0 - counterparty.recovery) * lambda_c
    s = survival(times, lambda_b, lambda_c)
    gamma, phi = config.cost_of_capital, config.phi

    def integral(profile) -> np.ndarray:
        return trapezoid(s * np.asarray(profile, dtype=float), times, axis=-1)

    epe_int = integral(epe)
    result = {
        "cva": -loss_c * epe_int,
        "dva": -loss_b * integral(ene),
        "fca_prime": -loss_b * epe_int,
        "colva": -issuer.collateral_spread * integral(collateral),
    }
    capital_int = 0.0
    for name in CAPITAL_COMPONENTS:
        k_disc = integral(capital_discounted[name])
        k_rate = integral(capital_rate_weighted[name])
        capital_int = capital_int + k_disc
        result[f"kva_{name}"] = -(gamma * k_disc - phi * k_rate)
        result[f"kva_prime_{name}"] = -(gamma * k_disc - phi * (k_rate + loss_b * k_disc))
    result["fca"] = result["fca_prime"] + loss_b * phi * capital_int
    return result


def integrate_xva(
    exposure: ExposureProfile,
    capital: CapitalProfile,
    counterparty: CounterpartyProfile,
    issuer: IssuerParams,
    config: CapitalConfig,
    reference_notional: Optional[float] = None,
) -> XvaBreakdown:
    """
    Integrate all adjustments of one netting set.

    Args:
        reference_notional: Notional that bp figures refer to; defaults to the
            netting-set notional

    Raises:
        ValueError: if exposure and capital live on different grids
    """
    times = exposure.time_grid
    if capital.time_grid.shape != times.shape or not np.allclose(capital.time_grid, times):
        raise ValueError("Exposure and capital profiles are on different grids")
    notional = reference_notional if reference_notional is not None else exposure.notional
    if notional <= 0.0:
        raise ValueError(f"Reference notional must be positive, got {notional}")

    components = {
        "mr": capital.market_risk,
        "ccr": capital.counterparty_risk,
        "cva": capital.cva_risk,
    }
    values = xva_integrals(
        times,
        exposure.epe,
        exposure.ene,
        exposure.collateral.discounted,
        {k: m.discounted for k, m in components.items()},
        {k: m.rate_weighted for k, m in components.items()},
        counterparty,
        issuer,
        config,
    )
    to_bp = 1e4 / notional
    return XvaBreakdown(
        phi=config.phi,
        notional=notional,
        **{name: float(v) * to_bp for name, v in values.items()},
    )


@dataclass(frozen=True)
class PhiSensitivity:
    """KVA' (bp) across funding fractions and its distance from a straight line."""
    phis: tuple
    kva_prime: tuple
    collinearity_residual: float


def phi_sensitivity(
    exposure: ExposureProfile,
    capital: CapitalProfile,
    counterparty: CounterpartyProfile,
    issuer: IssuerParams,
    config: CapitalConfig,
    phis: Sequence[float] = (0.0, 0.5, 1.0),
    reference_notional: Optional[float] = None,
) -> PhiSensitivity:
    """KVA' is affine in phi; the residual of a straight-line fit measures that."""
    values = [
        integrate_xva(
            exposure, capital, counterparty, issuer, replace(config, phi=phi), reference_notional
        ).kva_prime
        for phi in phis
    ]
    if len(phis) > 1:
        slope, intercept = np.polyfit(phis, values, 1)
        residual = float(np.max(np.abs(np.asarray(values) - (intercept + slope * np.asarray(phis)))))
    else:
        residual = 0.0
    return PhiSensitivity(phis=tuple(phis), kva_prime=tuple(values), collinearity_residual=residual)


def kva_total(breakdowns: Sequence[XvaBreakdown]) -> float:
    """Portfolio KVA' (bp): sum over netting sets on a common reference notional."""
    if not breakdowns:
        return 0.0
    total = breakdowns[0]
    for item in breakdowns[1:]:
        total = total + item
    return total.kva_prime
