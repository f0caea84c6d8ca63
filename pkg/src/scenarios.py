"""
Hedging scenarios on a single client swap.

naked        the client swap alone, uncollateralized
backToBack   plus the mirrored swap with a hedge dealer under a perfect CSA
ir01Flat     plus a mirrored swap whose notional is chosen so that the total
             IR01, including the adjustments, is zero

Adjustments are portfolio-level: market-risk capital comes from the net ladder
of client and hedge trades and is attributed back to the two netting sets.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from src.config import IR01_BUMP_BP, XVA_THREADS
from src.constants import Columns, Ir01Convention, Messages, ScenarioKind, SwapDirection
from src.errors import NumericalError
from src.exposure import ExposureProfile, build_profile
from src.instruments import SwapSpec, ir01, par_rate
from src.logger import setup_logger
from src.models import MarketEnvironment
from src.regcap import CapitalConfig, CounterpartyProfile
from src.services.pricing_service import SimulationSettings, price_exposures, simulate_for
from src.services.rating_service import HEDGE_COUNTERPARTY, RatingTable, counterparty_for, hedge_counterparty
from src.xva_engine import XvaBreakdown

logger = setup_logger(__name__)

CLIENT = "client"
DEFAULT_RATINGS = ("AAA", "A", "BB", "CCC")
HEDGE_BRACKETS = ((0.5, 2.0), (0.1, 5.0))
ROOT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Scenario:
    """One hedging experiment over a grid of directions, ratings and phi values."""
    kind: ScenarioKind
    notional: float = 1_000_000.0
    maturity: float = 10.0
    pay_frequency: int = 2
    fixed_rate: Optional[float] = None       # par when omitted
    phis: Tuple[float, ...] = (0.0, 1.0)
    directions: Tuple[SwapDirection, ...] = (SwapDirection.PAYER, SwapDirection.RECEIVER)
    ratings: Tuple[str, ...] = DEFAULT_RATINGS
    capital: CapitalConfig = field(default_factory=CapitalConfig)
    convention: Ir01Convention = Ir01Convention.COST
    adjustments_enabled: bool = True
    hedge: CounterpartyProfile = field(default_factory=hedge_counterparty)

    def __post_init__(self):
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        object.__setattr__(self, "convention", Ir01Convention(self.convention))
        for phi in self.phis:
            if not 0.0 <= phi <= 1.0:
                raise ValueError(Messages.PHI_RANGE.format(phi=phi))


@dataclass(frozen=True)
class ScenarioRow:
    scenario: ScenarioKind
    phi: float
    direction: SwapDirection
    rating: str
    breakdown: XvaBreakdown
    ir01_bp: float
    hedge_multiplier: Optional[float] = None

    @property
    def hedge_change_pct(self) -> Optional[float]:
        if self.hedge_multiplier is None:
            return None
        return (self.hedge_multiplier - 1.0) * 100.0

    def as_row(self) -> Dict[str, object]:
        row = {
            Columns.PHI: self.phi,
            Columns.SWAP: self.direction.value,
            Columns.RATING: self.rating,
            **self.breakdown.as_row(),
            Columns.IR01: self.ir01_bp,
        }
        if self.scenario is ScenarioKind.IR01_FLAT:
            row[Columns.HEDGE_CHANGE] = self.hedge_change_pct
            row[Columns.HEDGE_MULTIPLIER] = self.hedge_multiplier
        return row


def table_columns(kind: ScenarioKind) -> List[str]:
    columns = list(Columns.TABLE)
    if ScenarioKind(kind) is ScenarioKind.IR01_FLAT:
        columns.extend(Columns.HEDGE)
    return columns


@dataclass(frozen=True, eq=False)
class _DirectionBook:
    """Client and unit hedge exposures under the base and bumped curves."""
    client: SwapSpec
    hedge: SwapSpec
    exposures: Dict[float, Tuple[ExposureProfile, ExposureProfile]]
    client_ir01: float
    hedge_ir01: float


class ScenarioRunner:
    """Evaluates every row of a scenario on shared simulated paths."""

    def __init__(
        self,
        scenario: Scenario,
        environment: MarketEnvironment,
        ratings: RatingTable,
        settings: SimulationSettings = SimulationSettings(),
        bump_bp: float = IR01_BUMP_BP,
    ):
        self.scenario = scenario
        self.environment = environment
        self.ratings = ratings
        self.settings = settings
        self.bump = bump_bp
        self._books: Dict[SwapDirection, _DirectionBook] = {}

    def _book(self, direction: SwapDirection) -> _DirectionBook:
        if direction in self._books:
            return self._books[direction]
        s = self.scenario
        rate = s.fixed_rate if s.fixed_rate is not None else par_rate(
            self.environment.curve, s.maturity, s.pay_frequency
        )
        client = SwapSpec(CLIENT, CLIENT, s.notional, rate, s.maturity, s.pay_frequency, direction)
        hedge = client.mirrored(HEDGE_COUNTERPARTY, s.hedge.counterparty_id, 1.0, collateralized=True)

        exposures = {}
        for shift in (0.0, self.bump, -self.bump):
            env = self.environment.shifted(shift) if shift else self.environment
            paths = simulate_for([client], env, self.settings)
            exposures[shift] = (
                build_profile([client], paths, cem_floor=s.capital.cem_floor),
                build_profile([hedge], paths, cem_floor=s.capital.cem_floor),
            )
        book = _DirectionBook(
            client=client,
            hedge=hedge,
            exposures=exposures,
            client_ir01=ir01([client], self.environment, bump_bp=self.bump),
            hedge_ir01=ir01([hedge], self.environment, bump_bp=self.bump),
        )
        self._books[direction] = book
        return book

    def adjustments(
        self,
        book: _DirectionBook,
        counterparty: CounterpartyProfile,
        config: CapitalConfig,
        multiplier: float,
        shift: float = 0.0,
    ) -> XvaBreakdown:
        """Portfolio breakdown with the hedge scaled by `multiplier` (0 drops it)."""
        client_exposure, hedge_exposure = book.exposures[shift]
        exposures = {CLIENT: client_exposure}
        counterparties = {CLIENT: counterparty}
        if multiplier > 0.0:
            exposures[self.scenario.hedge.counterparty_id] = hedge_exposure.scaled(multiplier)
            counterparties[self.scenario.hedge.counterparty_id] = self.scenario.hedge
        environment = self.environment.shifted(shift) if shift else self.environment
        result = price_exposures(exposures, counterparties, environment, config, book.client.notional)
        return result.total

    def total_ir01(
        self,
        book: _DirectionBook,
        counterparty: CounterpartyProfile,
        config: CapitalConfig,
        multiplier: float,
    ) -> float:
        """IR01 of client plus scaled hedge plus adjustments, currency per bp."""
        risk_free = book.client_ir01 + multiplier * book.hedge_ir01
        if not self.scenario.adjustments_enabled:
            return risk_free
        sign = 1.0 if self.scenario.convention is Ir01Convention.ECONOMIC else -1.0
        up = self.adjustments(book, counterparty, config, multiplier, self.bump).total_currency
        down = self.adjustments(book, counterparty, config, multiplier, -self.bump).total_currency
        return risk_free + sign * (up - down) / (2.0 * self.bump)

    def solve_hedge_multiplier(
        self,
        book: _DirectionBook,
        counterparty: CounterpartyProfile,
        config: CapitalConfig,
        brackets: Sequence[Tuple[float, float]] = HEDGE_BRACKETS,
    ) -> float:
        """
        Hedge notional multiplier that makes the total IR01 vanish.

        Raises:
            NumericalError: if no bracket shows a sign change
        """
        if not self.scenario.adjustments_enabled:
            return -book.client_ir01 / book.hedge_ir01

        def objective(m: float) -> float:
            return self.total_ir01(book, counterparty, config, m)

        for lower, upper in brackets:
            f_lower, f_upper = objective(lower), objective(upper)
            if np.sign(f_lower) != np.sign(f_upper):
                return float(brentq(objective, lower, upper, xtol=ROOT_TOLERANCE))
            logger.warning(f"No IR01 sign change for hedge multiplier in [{lower}, {upper}]")
        raise NumericalError(
            "scenarios",
            f"IR01 root not bracketed for {book.client.direction.value} {counterparty.rating} phi={config.phi}",
        )

    def row(self, direction: SwapDirection, rating: str, phi: float) -> ScenarioRow:
        s = self.scenario
        book = self._book(direction)
        counterparty = counterparty_for(
            self.ratings, rating, CLIENT, spread_is_lambda=self.environment.issuer.spread_is_lambda
        )
        config = replace(s.capital, phi=phi)

        multiplier = None
        if s.kind is ScenarioKind.BACK_TO_BACK:
            multiplier = 1.0
        elif s.kind is ScenarioKind.IR01_FLAT:
            multiplier = self.solve_hedge_multiplier(book, counterparty, config)
        scale = multiplier or 0.0

        if s.adjustments_enabled:
            breakdown = self.adjustments(book, counterparty, config, scale)
        else:
            breakdown = XvaBreakdown(phi=phi, notional=s.notional)
        ir01_bp = self.total_ir01(book, counterparty, config, scale) / s.notional * 1e4

        logger.info(Messages.SCENARIO_ROW.format(
            scenario=s.kind.value, direction=direction.value, rating=rating, phi=phi,
            total=breakdown.total_prime,
        ))
        return ScenarioRow(s.kind, phi, direction, rating, breakdown, ir01_bp, multiplier)

    def run(self, max_workers: int = XVA_THREADS) -> List[ScenarioRow]:
        """Rows ordered by phi, then direction, then rating."""
        s = self.scenario
        for direction in s.directions:
            self._book(direction)
        keys = list(product(s.phis, s.directions, s.ratings))
        with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
            return list(pool.map(lambda key: self.row(key[1], key[2], key[0]), keys))


def run_scenario(
    scenario: Scenario,
    environment: MarketEnvironment,
    ratings: RatingTable,
    settings: SimulationSettings = SimulationSettings(),
) -> List[ScenarioRow]:
    return ScenarioRunner(scenario, environment, ratings, settings).run(settings.max_workers)


def rows_to_frame(rows: Sequence[ScenarioRow], kind: ScenarioKind) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in rows], columns=table_columns(kind))
