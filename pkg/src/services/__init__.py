"""
Services package for the pricer.

This package contains the loaders and orchestration used by the command line:
- market_service: Market environment from defaults or a JSON file
- rating_service: Rating weight table and counterparty profiles
- portfolio_service: Trades and counterparties from JSON or xlsx
- pricing_service: Simulation, exposures, capital and adjustments of a portfolio
- report_service: CSV and xlsx output
- capital_service: Standalone regulatory capital report at one time
"""

from src.services.market_service import default_environment, flat_curve_for_par, load_market
from src.services.rating_service import (
    RatingEntry,
    RatingTable,
    counterparty_for,
    hedge_counterparty,
    load_rating_table,
)
from src.services.portfolio_service import (
    CounterpartyRef,
    Portfolio,
    build_portfolio,
    load_portfolio,
)
from src.services.pricing_service import (
    NettingSetResult,
    PortfolioResult,
    SimulationSettings,
    build_exposures,
    group_netting_sets,
    portfolio_ir01,
    price_exposures,
    price_portfolio,
    profile_frames,
    simulate_for,
)
from src.services.report_service import to_csv, write_profiles, write_table
from src.services.capital_service import capital_report

__all__ = [
    # Market service
    "default_environment",
    "flat_curve_for_par",
    "load_market",
    # Rating service
    "RatingEntry",
    "RatingTable",
    "counterparty_for",
    "hedge_counterparty",
    "load_rating_table",
    # Portfolio service
    "CounterpartyRef",
    "Portfolio",
    "build_portfolio",
    "load_portfolio",
    # Pricing service
    "NettingSetResult",
    "PortfolioResult",
    "SimulationSettings",
    "build_exposures",
    "group_netting_sets",
    "portfolio_ir01",
    "price_exposures",
    "price_portfolio",
    "profile_frames",
    "simulate_for",
    # Report service
    "to_csv",
    "write_profiles",
    "write_table",
    # Capital service
    "capital_report",
]
