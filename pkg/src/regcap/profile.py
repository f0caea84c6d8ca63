"""
Counterparty profiles, capital configuration and the expected capital
profile K(t) = K_MR(t) + K_CCR(t) + K_CVA(t) of a netting set.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from src.config import (
    CAPITAL_RATIO,
    COST_OF_CAPITAL,
    COUNTERPARTY_RECOVERY,
    CVA_HORIZON,
    FIRB_LGD,
    XVA_THREADS,
)
from src.constants import CapitalColumns, EadMethod, WeightMethod
from src.exposure import ExposureProfile
from src.instruments import SwapSpec
from src.logger import setup_logger
from src.models import Moments
from src.regcap.ccr import (
    ccr_capital,
    effective_maturity_cva,
    effective_maturity_irb,
    irb_weight,
    standardized_capital_weight,
)
from src.regcap.cva_capital import cva_capital_std_large_n
from src.regcap.market_risk import ladder_breakpoints, market_risk_std

logger = setup_logger(__name__)


@dataclass(frozen=True)
class CounterpartyProfile:
    """Credit data and regulatory weights of one counterparty."""
    counterparty_id: str
    rating: str
    cds_spread: float
    ccr_risk_weight: float
    cva_weight: float
    recovery: float = COUNTERPARTY_RECOVERY
    pd: Optional[float] = None
    domicile_exempt: bool = False
    spread_is_lambda: bool = False

    def __post_init__(self):
        if not 0.0 <= self.recovery < 1.0:
            raise ValueError(f"Counterparty {self.counterparty_id}: recovery must lie in [0, 1)")
        if self.cds_spread < 0.0:
            raise ValueError(f"Counterparty {self.counterparty_id}: negative CDS spread")

    @property
    def hazard_rate(self) -> float:
        """lambda_C from the CDS spread."""
        if self.spread_is_lambda:
            return self.cds_spread
        return self.cds_spread / (1.0 - self.recovery)

    def capital_weight(self, method: WeightMethod, maturity: float) -> float:
        """Weight w of the CCR charge K = c * 12.5 * w * EAD."""
        if WeightMethod(method) is WeightMethod.IRB:
            if self.pd is None:
                raise ValueError(
                    f"Counterparty {self.counterparty_id} ({self.rating}) has no PD for IRB weights"
                )
            return irb_weight(self.pd, FIRB_LGD, maturity)
        return standardized_capital_weight(self.ccr_risk_weight)


@dataclass(frozen=True)
class CapitalConfig:
    """Capital rules and funding choices of a pricing run."""
    capital_ratio: float = CAPITAL_RATIO
    cost_of_capital: float = COST_OF_CAPITAL
    phi: float = 0.0
    horizon: float = CVA_HORIZON
    ead_method: EadMethod = EadMethod.CEM
    weight_method: WeightMethod = WeightMethod.STANDARDIZED
    cem_floor: bool = True
    first_fixing: float = 0.25
    float_reset: float = 0.25

    def __post_init__(self):
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError(f"phi must lie in [0, 1], got {self.phi}")
        if self.capital_ratio <= 0.0:
            raise ValueError(f"Capital ratio must be positive, got {self.capital_ratio}")
        if self.cost_of_capital < 0.0:
            raise ValueError(f"Cost of capital must be non-negative, got {self.cost_of_capital}")
        if self.horizon <= 0.0:
            raise ValueError(f"CVA horizon must be positive, got {self.horizon}")
        object.__setattr__(self, "ead_method", EadMethod(self.ead_method))
        object.__setattr__(self, "weight_method", WeightMethod(self.weight_method))


@dataclass(frozen=True, eq=False)
class CapitalProfile:
    """Expected capital of a netting set on the exposure grid, in currency units."""
    netting_set: str
    time_grid: np.ndarray
    market_risk: Moments
    counterparty_risk: Moments
    cva_risk: Moments

    @property
    def k_mr(self) -> np.ndarray:
        return self.market_risk.expected

    @property
    def k_ccr(self) -> np.ndarray:
        return self.counterparty_risk.expected

    @property
    def k_cva(self) -> np.ndarray:
        return self.cva_risk.expected

    @property
    def k_total(self) -> np.ndarray:
        return self.k_mr + self.k_ccr + self.k_cva

    @property
    def total(self) -> Moments:
        return self.market_risk + self.counterparty_risk + self.cva_risk

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            CapitalColumns.TIME: self.time_grid,
            CapitalColumns.K_MR: self.k_mr,
            CapitalColumns.K_CCR: self.k_ccr,
            CapitalColumns.K_CVA: self.k_cva,
            CapitalColumns.K_TOTAL: self.k_total,
        }, columns=CapitalColumns.ALL)


def _hat_averages(times: np.ndarray, knots: np.ndarray, charges: np.ndarray) -> np.ndarray:
    """Average of a piecewise-constant charge (one value per knot interval) against each node's hat."""
    widths = np.diff(knots)
    mids = 0.5 * (knots[:-1] + knots[1:])
    cell = np.clip(np.searchsorted(times, mids) - 1, 0, times.size - 2)
    steps = np.diff(times)
    mass = charges * widths / steps[cell]
    weighted = np.zeros_like(times)
    np.add.at(weighted, cell, mass * (times[cell + 1] - mids))
    np.add.at(weighted, cell + 1, mass * (mids - times[cell]))
    support = np.zeros_like(times)
    support[:-1] += 0.5 * steps
    support[1:] += 0.5 * steps
    return weighted / support


def market_risk_profile(
    trades: Sequence[SwapSpec],
    times: Sequence[float],
    config: CapitalConfig = CapitalConfig(),
    max_workers: int = XVA_THREADS,
    averaged: bool = True,
) -> np.ndarray:
    """
    Deterministic ladder charge on rolled-down residual maturities.

    The charge steps whenever a position crosses a band edge. With `averaged`
    each node carries the charge averaged against its trapezoid hat, so the
    trapezoid rule over the grid integrates the steps exactly; otherwise the
    charge is sampled at the nodes.
    """
    times = np.asarray(times, dtype=float)

    def charge(t: float) -> float:
        return market_risk_std(trades, t, config.first_fixing, config.float_reset)

    if not averaged or times.size < 2:
        points = times
    else:
        breaks = ladder_breakpoints(trades, times[-1], config.first_fixing, config.float_reset)
        knots = np.union1d(times, breaks[(breaks > times[0]) & (breaks < times[-1])])
        points = 0.5 * (knots[:-1] + knots[1:])

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        values = np.array(list(pool.map(charge, points)), dtype=float)
    if points is times:
        return values
    return _hat_averages(times, knots, values)


def attribute_market_risk(
    netting_sets: Mapping[str, Sequence[SwapSpec]],
    times: Sequence[float],
    config: CapitalConfig = CapitalConfig(),
) -> Dict[str, np.ndarray]:
    """
    Portfolio-level ladder charge split across netting sets pro rata to their
    standalone charges. The shares add up to the portfolio charge at every t.
    """
    all_trades = [spec for trades in netting_sets.values() for spec in trades]
    portfolio = market_risk_profile(all_trades, times, config)
    standalone = {
        name: market_risk_profile(trades, times, config) for name, trades in netting_sets.items()
    }
    total = np.sum(list(standalone.values()), axis=0) if standalone else np.zeros(len(times))
    shares = {}
    for name, charge in standalone.items():
        ratio = np.divide(charge, total, out=np.zeros_like(charge), where=total > 0.0)
        shares[name] = portfolio * ratio
    return shares


def _live_maturities(trades: Sequence[SwapSpec], t: float):
    live = [spec for spec in trades if spec.maturity - t > 1e-9]
    return [spec.maturity - t for spec in live], [spec.notional for spec in live]


def build_capital_profile(
    exposure: ExposureProfile,
    counterparty: CounterpartyProfile,
    config: CapitalConfig = CapitalConfig(),
    market_risk: Optional[Sequence[float]] = None,
    time_grid: Optional[Sequence[float]] = None,
) -> CapitalProfile:
    """
    Expected capital profile of a netting set.

    Args:
        exposure: Exposure profile of the netting set
        counterparty: Credit data of the netting-set counterparty
        config: Capital rules
        market_risk: Market-risk charge attributed to this netting set per grid
            time; defaults to the standalone ladder of the netting-set trades
        time_grid: Requested grid, must equal the exposure grid

    Raises:
        ValueError: grid mismatch
    """
    times = exposure.time_grid
    if time_grid is not None:
        requested = np.asarray(time_grid, dtype=float)
        if requested.shape != times.shape or not np.allclose(requested, times, atol=1e-9):
            raise ValueError("Capital profile grid does not match the exposure grid")

    if market_risk is None:
        k_mr = market_risk_profile(exposure.trades, times, config)
    else:
        k_mr = np.asarray(market_risk, dtype=float)
        if k_mr.shape != times.shape:
            raise ValueError("Market-risk charge does not match the exposure grid")

    ead = exposure.ead[config.ead_method]
    ccr_factor = np.zeros_like(times)
    cva_factor = np.zeros_like(times)
    cva_exempt = counterparty.domicile_exempt or exposure.collateralized
    for k, t in enumerate(times):
        maturities, notionals = _live_maturities(exposure.trades, t)
        if not maturities:
            continue
        weight = counterparty.capital_weight(
            config.weight_method, effective_maturity_irb(maturities, notionals)
        )
        ccr_factor[k] = ccr_capital(1.0, weight, config.capital_ratio)
        if not cva_exempt:
            cva_factor[k] = cva_capital_std_large_n(
                counterparty.cva_weight,
                effective_maturity_cva(maturities, notionals),
                1.0,
                config.horizon,
            )

    return CapitalProfile(
        netting_set=exposure.netting_set,
        time_grid=times,
        market_risk=exposure.discount.scaled(k_mr),
        counterparty_risk=ead.scaled(ccr_factor),
        cva_risk=ead.scaled(cva_factor),
    )
