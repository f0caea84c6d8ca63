"""
Market service - builds the market environment from defaults or a JSON file.

Market file layout (every block optional):

    {
      "curve": [[1, 0.02], [2, 0.022], [5, 0.025], [10, 0.027]],
      "hw": {"a": 0.05, "sigma": 0.01},
      "issuer": {"fundingSpread": 0.01, "recovery": 0.4, "collateralSpread": 0.0},
      "seed": 20140101
    }

The curve may also be given as {"times": [...], "zeroRates": [...]}, the
Hull-White block as "hullWhite": {"meanReversion", "volatility"}, and a flat
curve by its par rate as "flatParRate".
"""

import json
from pathlib import Path
from typing import Optional

import numpy as np

from src.config import (
    COLLATERAL_SPREAD,
    DEFAULT_PAR_RATE,
    DEFAULT_SEED,
    HW_MEAN_REVERSION,
    HW_VOLATILITY,
    ISSUER_RECOVERY,
    ISSUER_SPREAD,
)
from src.constants import Messages
from src.curve_model import DiscountCurve
from src.errors import ConfigError
from src.logger import setup_logger
from src.models import IssuerParams, MarketEnvironment

logger = setup_logger(__name__)


def flat_curve_for_par(par: float = DEFAULT_PAR_RATE, pay_frequency: int = 2) -> DiscountCurve:
    """Flat continuously compounded curve whose par swap rate is `par` at any maturity."""
    return DiscountCurve.flat(pay_frequency * np.log1p(par / pay_frequency))


def default_environment(
    seed: int = DEFAULT_SEED,
    spread_is_lambda: bool = False,
) -> MarketEnvironment:
    """Flat 2.7% par curve, Hull-White a=5%, sigma=1%, issuer spread 100bp."""
    return MarketEnvironment(
        curve=flat_curve_for_par(),
        mean_reversion=HW_MEAN_REVERSION,
        volatility=HW_VOLATILITY,
        issuer=IssuerParams(spread_is_lambda=spread_is_lambda),
        seed=seed,
    )


def _number(block: dict, name: str, default: float, kind: str) -> float:
    raw = block.get(name, default)
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(Messages.FIELD_INVALID.format(kind=kind, index=0, field=name, value=raw))
    return float(raw)


MARKET_FIELDS = ("curve", "flatParRate", "hw", "hullWhite", "issuer", "seed")


def parse_curve(block) -> DiscountCurve:
    """
    Curve from a list of [t, zeroRate] pairs or a {"times", "zeroRates"} block.

    Raises:
        ConfigError: neither form, or pairs of the wrong size
    """
    if isinstance(block, dict):
        if "times" not in block or "zeroRates" not in block:
            missing = "times" if "times" not in block else "zeroRates"
            raise ConfigError(Messages.FIELD_MISSING.format(kind="Curve", index=0, field=missing))
        return DiscountCurve(times=tuple(block["times"]), zero_rates=tuple(block["zeroRates"]))
    if isinstance(block, list):
        for index, pair in enumerate(block):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ConfigError(Messages.FIELD_INVALID.format(kind="Curve", index=index, field="pillar", value=pair))
        return DiscountCurve(
            times=tuple(pair[0] for pair in block),
            zero_rates=tuple(pair[1] for pair in block),
        )
    raise ConfigError(Messages.FIELD_INVALID.format(kind="Market", index=0, field="curve", value=block))


def _hull_white(document: dict) -> tuple:
    if "hw" in document:
        hw = document["hw"]
        return (
            _number(hw, "a", HW_MEAN_REVERSION, "Hull-White"),
            _number(hw, "sigma", HW_VOLATILITY, "Hull-White"),
        )
    hw = document.get("hullWhite", {})
    return (
        _number(hw, "meanReversion", HW_MEAN_REVERSION, "Hull-White"),
        _number(hw, "volatility", HW_VOLATILITY, "Hull-White"),
    )


def load_market(
    path: Path,
    seed: Optional[int] = None,
    spread_is_lambda: bool = False,
) -> MarketEnvironment:
    """
    Read a market file.

    Raises:
        ConfigError: missing file or malformed content
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(Messages.FILE_NOT_FOUND.format(kind="Market", path=path))
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(Messages.FILE_UNREADABLE.format(kind="market", path=path, error=e)) from e

    if not isinstance(document, dict):
        raise ConfigError(f"Market file {path} must hold an object, got {type(document).__name__}")
    unknown = sorted(set(document) - set(MARKET_FIELDS))
    if unknown:
        logger.warning(Messages.UNKNOWN_FIELDS.format(kind=f"Market file {path}", fields=unknown))

    try:
        if "curve" in document:
            curve = parse_curve(document["curve"])
        else:
            curve = flat_curve_for_par(_number(document, "flatParRate", DEFAULT_PAR_RATE, "Market"))

        mean_reversion, volatility = _hull_white(document)
        issuer_block = document.get("issuer", {})
        issuer = IssuerParams(
            funding_spread=_number(issuer_block, "fundingSpread", ISSUER_SPREAD, "Issuer"),
            recovery=_number(issuer_block, "recovery", ISSUER_RECOVERY, "Issuer"),
            collateral_spread=_number(issuer_block, "collateralSpread", COLLATERAL_SPREAD, "Issuer"),
            spread_is_lambda=bool(issuer_block.get("spreadIsLambda", spread_is_lambda)),
        )
        environment = MarketEnvironment(
            curve=curve,
            mean_reversion=mean_reversion,
            volatility=volatility,
            issuer=issuer,
            seed=int(seed if seed is not None else document.get("seed", DEFAULT_SEED)),
        )
    except KeyError as e:
        raise ConfigError(Messages.FIELD_MISSING.format(kind="Market", index=0, field=e.args[0])) from e
    except (AttributeError, TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Invalid market file {path}: {e}") from e

    logger.info(f"Loaded market from {path} ({len(curve.times)} curve pillars)")
    return environment
