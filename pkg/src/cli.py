"""
Command line interface.

    python main.py price     --portfolio P [--market M] [--phi 0,1]
    python main.py scenario  --scenario naked|backToBack|ir01Flat [--phi 0,1]
    python main.py capital   --portfolio P [--time 0.0]
    python main.py pde-check [--paths n] [--grid n]
    python main.py sample    WORKBOOK.xlsx

Tables go to stdout (or --output) as CSV; logs go to stderr.
Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import pandas as pd

from src.config import (
    CAPITAL_RATIO,
    COST_OF_CAPITAL,
    DEFAULT_PATHS,
    DEFAULT_SEED,
    GRID_STEP_MONTHS,
    MIN_TABLE_PATHS,
    RATING_TABLE_FILE,
    XVA_THREADS,
)
from src.constants import (
    Columns,
    EadMethod,
    Ir01Convention,
    Messages,
    PdeCheckColumns,
    ScenarioKind,
    WeightMethod,
)
from src.errors import ConfigError, NumericalError, XvaError
from src.excel_handler import create_sample_workbook
from src.logger import setup_logger
from src.models import MarketEnvironment
from src.pde_solver import PdeProblem, call_payoff, constant_capital, cross_check_call
from src.regcap import CapitalConfig
from src.scenarios import Scenario, rows_to_frame, run_scenario
from src.services import (
    SimulationSettings,
    capital_report,
    default_environment,
    load_market,
    load_portfolio,
    load_rating_table,
    price_portfolio,
    profile_frames,
    write_profiles,
    write_table,
)

logger = setup_logger(__name__)

COMMANDS = ("price", "scenario", "capital", "pde-check", "sample")


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs, assembled from arguments and defaults."""
    command: str
    market: Optional[Path] = None
    portfolio: Optional[Path] = None
    ratings: Path = RATING_TABLE_FILE
    rating: Optional[str] = None
    scenario: ScenarioKind = ScenarioKind.NAKED
    phis: Tuple[float, ...] = (0.0, 1.0)
    gamma_k: float = COST_OF_CAPITAL
    capital_ratio: float = CAPITAL_RATIO
    grid_months: int = GRID_STEP_MONTHS
    n_paths: int = DEFAULT_PATHS
    seed: int = DEFAULT_SEED
    threads: int = XVA_THREADS
    output: Optional[Path] = None
    xlsx: Optional[Path] = None
    profiles: Optional[Path] = None
    workbook: Optional[Path] = None
    spread_is_lambda: bool = False
    cem_floor: bool = True
    adjustments: bool = True
    ir01_convention: Ir01Convention = Ir01Convention.COST
    ead_method: EadMethod = EadMethod.CEM
    weight_method: WeightMethod = WeightMethod.STANDARDIZED
    time: float = 0.0
    lgd: Optional[float] = None
    # pde-check
    spot: float = 100.0
    strike: float = 100.0
    maturity: float = 1.0
    sigma: float = 0.2
    rate: float = 0.02
    lambda_b: float = 0.01
    lambda_c: float = 0.01
    capital_amount: float = 5.0
    grid: int = 400

    def validate(self) -> "RunConfig":
        """
        Raises:
            ConfigError: missing files or out-of-range settings
        """
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command '{self.command}'")
        for kind, path in (("Market", self.market), ("Portfolio", self.portfolio), ("Rating table", self.ratings)):
            if path is not None and not Path(path).exists():
                raise ConfigError(Messages.FILE_NOT_FOUND.format(kind=kind, path=path))
        if self.command in ("price", "capital") and self.portfolio is None:
            raise ConfigError(f"'{self.command}' needs --portfolio")
        if self.command == "sample":
            if self.workbook is None or Path(self.workbook).suffix.lower() != ".xlsx":
                raise ConfigError(f"'sample' needs an .xlsx workbook path, got {self.workbook}")
        if not self.phis:
            raise ConfigError("At least one phi value is required")
        for phi in self.phis:
            if not 0.0 <= phi <= 1.0:
                raise ConfigError(Messages.PHI_RANGE.format(phi=phi))
        if self.command == "scenario" and self.n_paths < MIN_TABLE_PATHS:
            raise ConfigError(Messages.PATHS_TOO_FEW.format(minimum=MIN_TABLE_PATHS, paths=self.n_paths))
        for name in ("n_paths", "grid_months", "capital_ratio", "threads", "grid"):
            if getattr(self, name) <= 0:
                raise ConfigError(Messages.POSITIVE.format(name=name, value=getattr(self, name)))
        if self.gamma_k < 0.0:
            raise ConfigError(f"gamma_k must be non-negative, got {self.gamma_k}")
        if self.lgd is not None and not 0.0 < self.lgd <= 1.0:
            raise ConfigError(f"LGD must lie in (0, 1], got {self.lgd}")
        return self

    @property
    def settings(self) -> SimulationSettings:
        return SimulationSettings(n_paths=self.n_paths, step_months=self.grid_months, max_workers=self.threads)

    def capital_config(self, phi: float = 0.0) -> CapitalConfig:
        return CapitalConfig(
            capital_ratio=self.capital_ratio,
            cost_of_capital=self.gamma_k,
            phi=phi,
            ead_method=self.ead_method,
            weight_method=self.weight_method,
            cem_floor=self.cem_floor,
        )


def _phi_list(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"phi list must be comma separated numbers, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kva-pricer", description="Valuation adjustments with capital (KVA)")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--market", type=Path, help="market JSON file (default: flat 2.7%% par curve)")
    common.add_argument("--ratings", type=Path, default=RATING_TABLE_FILE, help="rating weight table")
    common.add_argument("--phi", type=_phi_list, default=(0.0, 1.0), help="funding fractions, e.g. 0,1")
    common.add_argument("--gamma-k", type=float, default=COST_OF_CAPITAL, help="cost of capital")
    common.add_argument("--capital-ratio", type=float, default=CAPITAL_RATIO)
    common.add_argument("--grid-months", type=int, default=GRID_STEP_MONTHS)
    common.add_argument("--paths", type=int, default=DEFAULT_PATHS)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=XVA_THREADS)
    common.add_argument("--output", type=Path, help="CSV file (stdout when omitted)")
    common.add_argument("--xlsx", type=Path, help="also write the table to this workbook")
    common.add_argument("--spread-is-lambda", action="store_true", help="quoted spreads are hazard rates")
    common.add_argument("--no-cem-floor", action="store_true", help="do not floor CEM replacement cost")
    common.add_argument("--ir01-convention", choices=[c.value for c in Ir01Convention],
                        default=Ir01Convention.COST.value)
    common.add_argument("--ead-method", choices=[m.value for m in EadMethod], default=EadMethod.CEM.value)
    common.add_argument("--weight-method", choices=[m.value for m in WeightMethod],
                        default=WeightMethod.STANDARDIZED.value)

    price = sub.add_parser("price", parents=[common], help="price a portfolio")
    price.add_argument("--portfolio", type=Path, required=True)
    price.add_argument("--rating", help="rating for counterparties the portfolio does not list")
    price.add_argument("--profiles", type=Path, help="directory for exposure/capital profile CSVs")

    scenario = sub.add_parser("scenario", parents=[common], help="hedging scenario tables")
    scenario.add_argument("--scenario", choices=[k.value for k in ScenarioKind], default=ScenarioKind.NAKED.value)
    scenario.add_argument("--no-adjustments", action="store_true", help="switch all adjustments off")

    capital = sub.add_parser("capital", parents=[common], help="standalone regulatory capital")
    capital.add_argument("--portfolio", type=Path, required=True)
    capital.add_argument("--rating", help="rating for counterparties the portfolio does not list")
    capital.add_argument("--time", type=float, default=0.0, help="valuation time in years")
    capital.add_argument("--lgd", type=float, help="market LGD for the regulatory CVA")

    pde = sub.add_parser("pde-check", parents=[common], help="PDE against Monte Carlo quadrature")
    pde.add_argument("--grid", type=int, default=400, help="space and time steps")
    pde.add_argument("--spot", type=float, default=100.0)
    pde.add_argument("--strike", type=float, default=100.0)
    pde.add_argument("--maturity", type=float, default=1.0)
    pde.add_argument("--sigma", type=float, default=0.2)
    pde.add_argument("--rate", type=float, default=0.02)
    pde.add_argument("--lambda-b", type=float, default=0.01)
    pde.add_argument("--lambda-c", type=float, default=0.01)
    pde.add_argument("--capital-amount", type=float, default=5.0, help="constant capital K")

    sample = sub.add_parser("sample", parents=[common], help="write a sample portfolio workbook")
    sample.add_argument("workbook", type=Path, help="xlsx file to create")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {
        "command": args.command,
        "market": args.market,
        "ratings": args.ratings,
        "phis": args.phi,
        "gamma_k": args.gamma_k,
        "capital_ratio": args.capital_ratio,
        "grid_months": args.grid_months,
        "n_paths": args.paths,
        "seed": args.seed,
        "threads": args.threads,
        "output": args.output,
        "xlsx": args.xlsx,
        "spread_is_lambda": args.spread_is_lambda,
        "cem_floor": not args.no_cem_floor,
        "ir01_convention": Ir01Convention(args.ir01_convention),
        "ead_method": EadMethod(args.ead_method),
        "weight_method": WeightMethod(args.weight_method),
    }
    optional = ("portfolio", "rating", "profiles", "workbook", "time", "lgd", "grid", "spot",
                "strike", "maturity", "sigma", "rate", "lambda_b", "lambda_c", "capital_amount")
    for name in optional:
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    if hasattr(args, "scenario"):
        fields["scenario"] = ScenarioKind(args.scenario)
        fields["adjustments"] = not args.no_adjustments
    return RunConfig(**fields)


def _environment(config: RunConfig) -> MarketEnvironment:
    if config.market is not None:
        return load_market(config.market, seed=config.seed, spread_is_lambda=config.spread_is_lambda)
    return default_environment(seed=config.seed, spread_is_lambda=config.spread_is_lambda)


def run_price(config: RunConfig) -> pd.DataFrame:
    environment = _environment(config)
    portfolio = load_portfolio(config.portfolio, environment.curve)
    counterparties = portfolio.profiles(
        load_rating_table(config.ratings), config.rating, config.spread_is_lambda
    )
    frames = []
    for phi in config.phis:
        result = price_portfolio(
            portfolio.trades, counterparties, environment, config.capital_config(phi), config.settings
        )
        frames.append(result.to_frame())
        if config.profiles is not None and phi == config.phis[0]:
            write_profiles(profile_frames(result), config.profiles)
    return pd.concat(frames, ignore_index=True)


def run_scenario_table(config: RunConfig) -> pd.DataFrame:
    environment = _environment(config)
    scenario = Scenario(
        kind=config.scenario,
        phis=config.phis,
        capital=config.capital_config(),
        convention=config.ir01_convention,
        adjustments_enabled=config.adjustments,
    )
    rows = run_scenario(scenario, environment, load_rating_table(config.ratings), config.settings)
    return rows_to_frame(rows, config.scenario)


def run_capital(config: RunConfig) -> pd.DataFrame:
    environment = _environment(config)
    portfolio = load_portfolio(config.portfolio, environment.curve)
    counterparties = portfolio.profiles(
        load_rating_table(config.ratings), config.rating, config.spread_is_lambda
    )
    capital_config = config.capital_config(config.phis[0])
    result = price_portfolio(portfolio.trades, counterparties, environment, capital_config, config.settings)
    return capital_report(result, environment, capital_config, config.time, config.lgd)


def run_pde_check(config: RunConfig) -> pd.DataFrame:
    """
    Raises:
        NumericalError: if the PDE and the quadrature disagree
    """
    rows = []
    for phi in config.phis:
        problem = PdeProblem(
            payoff=call_payoff(config.strike),
            spot=config.spot,
            maturity=config.maturity,
            sigma=config.sigma,
            rate=config.rate,
            lambda_b=config.lambda_b,
            lambda_c=config.lambda_c,
            phi=phi,
            cost_of_capital=config.gamma_k,
            capital=constant_capital(config.capital_amount),
            n_space=config.grid,
            n_time=config.grid,
        )
        check = cross_check_call(problem, config.strike, n_paths=config.n_paths, seed=config.seed)
        rows.append({
            Columns.PHI: phi,
            PdeCheckColumns.PDE: check.pde,
            PdeCheckColumns.QUADRATURE: check.quadrature,
            PdeCheckColumns.STDERR: check.stderr,
            PdeCheckColumns.DIFFERENCE: check.difference,
            PdeCheckColumns.TOLERANCE: check.tolerance,
            PdeCheckColumns.PASSED: check.passed,
        })
    frame = pd.DataFrame(rows)
    if not frame[PdeCheckColumns.PASSED].all():
        write_table(frame, config.output, config.xlsx, sheet="pde_check")
        raise NumericalError("pde_solver", "PDE and quadrature adjustments disagree beyond tolerance")
    return frame


def run_sample(config: RunConfig) -> pd.DataFrame:
    """Write the template workbook and return its trades as they would be priced."""
    create_sample_workbook(config.workbook)
    portfolio = load_portfolio(config.workbook, _environment(config).curve)
    return pd.DataFrame([
        {
            "id": spec.trade_id,
            "counterpartyId": spec.counterparty_id,
            "notional_ccy": spec.notional,
            "fixedRate_pct": spec.fixed_rate * 100.0,
            "maturityYears": spec.maturity,
            "freq": spec.pay_frequency,
            "direction": spec.direction.value,
            "collateralized": spec.collateralized,
        }
        for spec in portfolio.trades
    ])


RUNNERS = {
    "price": run_price,
    "scenario": run_scenario_table,
    "capital": run_capital,
    "pde-check": run_pde_check,
    "sample": run_sample,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        config.validate()
        frame = RUNNERS[config.command](config)
        write_table(frame, config.output, config.xlsx, sheet=config.command)
        return 0
    except XvaError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return ConfigError.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))
