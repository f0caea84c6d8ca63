"""
Pricing service - simulation, exposure, capital and adjustments for a portfolio.
"""

from dataclasses import dataclass, field
from functools import reduce
from operator import add
from typing import Dict, List, Mapping, Optional, Sequence

import pandas as pd

from src.config import DEFAULT_PATHS, GRID_STEP_MONTHS, XVA_THREADS
from src.constants import CapitalColumns, Columns, Ir01Convention, Messages
from src.curve_model import PathSet, monthly_grid, simulate_paths
from src.exposure import ExposureProfile, build_profile
from src.instruments import SwapSpec, ir01
from src.logger import setup_logger
from src.models import MarketEnvironment
from src.regcap import (
    CapitalConfig,
    CapitalProfile,
    CounterpartyProfile,
    attribute_market_risk,
    build_capital_profile,
)
from src.xva_engine import XvaBreakdown, integrate_xva

logger = setup_logger(__name__)


@dataclass(frozen=True)
class SimulationSettings:
    n_paths: int = DEFAULT_PATHS
    step_months: int = GRID_STEP_MONTHS
    max_workers: int = XVA_THREADS

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError(Messages.POSITIVE.format(name="n_paths", value=self.n_paths))
        if self.step_months < 1:
            raise ValueError(Messages.POSITIVE.format(name="step_months", value=self.step_months))


@dataclass(frozen=True, eq=False)
class NettingSetResult:
    counterparty: CounterpartyProfile
    exposure: ExposureProfile
    capital: CapitalProfile
    breakdown: XvaBreakdown


@dataclass(frozen=True, eq=False)
class PortfolioResult:
    """Per-netting-set results on a common reference notional."""
    netting_sets: Dict[str, NettingSetResult] = field(default_factory=dict)

    @property
    def total(self) -> XvaBreakdown:
        return reduce(add, (r.breakdown for r in self.netting_sets.values()))

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for name, result in self.netting_sets.items():
            rows.append({Columns.NETTING_SET: name, Columns.PHI: result.breakdown.phi,
                         **_price_row(result.breakdown)})
        total = self.total
        rows.append({Columns.NETTING_SET: "TOTAL", Columns.PHI: total.phi, **_price_row(total)})
        return pd.DataFrame(rows, columns=Columns.PRICE)


def _price_row(breakdown: XvaBreakdown) -> Dict[str, float]:
    row = breakdown.as_row()
    row[Columns.COLVA] = breakdown.colva
    return row


def group_netting_sets(trades: Sequence[SwapSpec]) -> Dict[str, List[SwapSpec]]:
    groups: Dict[str, List[SwapSpec]] = {}
    for spec in trades:
        groups.setdefault(spec.counterparty_id, []).append(spec)
    return groups


def simulate_for(
    trades: Sequence[SwapSpec],
    environment: MarketEnvironment,
    settings: SimulationSettings = SimulationSettings(),
) -> PathSet:
    """Paths on a monthly grid out to the longest maturity, seeded from the environment."""
    horizon = max(spec.maturity for spec in trades)
    grid = monthly_grid(horizon, settings.step_months)
    return simulate_paths(environment.model, grid, settings.n_paths, environment.seed, settings.max_workers)


def build_exposures(
    netting_sets: Mapping[str, Sequence[SwapSpec]],
    paths: PathSet,
    config: CapitalConfig = CapitalConfig(),
) -> Dict[str, ExposureProfile]:
    exposures = {}
    for name, trades in netting_sets.items():
        exposures[name] = build_profile(trades, paths, cem_floor=config.cem_floor)
    return exposures


def price_exposures(
    exposures: Mapping[str, ExposureProfile],
    counterparties: Mapping[str, CounterpartyProfile],
    environment: MarketEnvironment,
    config: CapitalConfig,
    reference_notional: float,
) -> PortfolioResult:
    """
    Capital and adjustments of every netting set. Market-risk capital is
    computed on the whole portfolio and attributed to netting sets.
    """
    if not exposures:
        raise ValueError("Nothing to price: no netting sets")
    times = next(iter(exposures.values())).time_grid
    market_risk = attribute_market_risk(
        {name: exposure.trades for name, exposure in exposures.items()}, times, config
    )
    results = {}
    for name, exposure in exposures.items():
        counterparty = counterparties.get(name)
        if counterparty is None:
            raise ValueError(Messages.UNKNOWN_COUNTERPARTY.format(counterparty=name))
        capital = build_capital_profile(exposure, counterparty, config, market_risk=market_risk[name])
        breakdown = integrate_xva(
            exposure, capital, counterparty, environment.issuer, config, reference_notional
        )
        results[name] = NettingSetResult(counterparty, exposure, capital, breakdown)
    return PortfolioResult(results)


def price_portfolio(
    trades: Sequence[SwapSpec],
    counterparties: Mapping[str, CounterpartyProfile],
    environment: MarketEnvironment,
    config: CapitalConfig = CapitalConfig(),
    settings: SimulationSettings = SimulationSettings(),
    reference_notional: Optional[float] = None,
) -> PortfolioResult:
    """
    Price all adjustments of a portfolio.

    Args:
        reference_notional: Notional the bp figures refer to; defaults to the
            total portfolio notional
    """
    if not trades:
        raise ValueError("Nothing to price: empty portfolio")
    notional = reference_notional or float(sum(spec.notional for spec in trades))
    paths = simulate_for(trades, environment, settings)
    exposures = build_exposures(group_netting_sets(trades), paths, config)
    return price_exposures(exposures, counterparties, environment, config, notional)


def portfolio_ir01(
    trades: Sequence[SwapSpec],
    counterparties: Mapping[str, CounterpartyProfile],
    environment: MarketEnvironment,
    config: CapitalConfig = CapitalConfig(),
    settings: SimulationSettings = SimulationSettings(),
    convention: Ir01Convention = Ir01Convention.COST,
) -> float:
    """IR01 of V plus adjustments in currency per bp; both bumps reuse the environment seed."""
    def adjustments(env: MarketEnvironment) -> float:
        return price_portfolio(trades, counterparties, env, config, settings).total.total_currency

    return ir01(trades, environment, adjustments, convention)


def profile_frames(result: PortfolioResult) -> Dict[str, pd.DataFrame]:
    """Exposure and capital profile of every netting set side by side."""
    frames = {}
    for name, item in result.netting_sets.items():
        exposure = item.exposure.to_frame()
        capital = item.capital.to_frame().drop(columns=CapitalColumns.TIME)
        frames[name] = pd.concat([exposure, capital], axis=1)
    return frames

