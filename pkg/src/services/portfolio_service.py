"""
Portfolio service - reads trades and counterparty assignments from JSON or xlsx.

JSON layout:

    {
      "trades": [
        {"id": "T1", "counterpartyId": "C1", "notional": 1e6, "fixedRate": "par",
         "maturityYears": 10, "freq": 2, "direction": "payer",
         "collateralized": false}
      ],
      "counterparties": [
        {"id": "C1", "rating": "BB", "recovery": 0.4, "domicileExempt": false}
      ]
    }

A bare list of trades is accepted too. "payFrequency" is read when "freq" is
absent, and directions may be spelled "payer-fixed" / "receiver-fixed".

The xlsx form carries the same field names as headers on a "trades" sheet and
an optional "counterparties" sheet.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

from src.config import COUNTERPARTY_RECOVERY
from src.constants import Messages, SwapDirection
from src.curve_model import DiscountCurve
from src.errors import ConfigError
from src.excel_handler import read_portfolio_workbook, validate_portfolio_workbook
from src.instruments import SwapSpec, par_rate
from src.logger import setup_logger
from src.regcap import CounterpartyProfile
from src.services.pricing_service import group_netting_sets
from src.services.rating_service import RatingTable, counterparty_for

logger = setup_logger(__name__)

REQUIRED_TRADE_FIELDS = ("id", "counterpartyId", "notional", "fixedRate", "maturityYears")
TRADE_FIELDS = REQUIRED_TRADE_FIELDS + ("freq", "payFrequency", "direction", "collateralized")


@dataclass(frozen=True)
class CounterpartyRef:
    """Counterparty as named in a portfolio file, before rating lookup."""
    counterparty_id: str
    rating: str
    recovery: float = COUNTERPARTY_RECOVERY
    domicile_exempt: bool = False


@dataclass(frozen=True)
class Portfolio:
    trades: List[SwapSpec]
    counterparties: Dict[str, CounterpartyRef] = field(default_factory=dict)

    @property
    def netting_sets(self) -> Dict[str, List[SwapSpec]]:
        """Trades grouped by counterparty in order of first appearance."""
        return group_netting_sets(self.trades)

    def profiles(
        self,
        table: RatingTable,
        default_rating: Optional[str] = None,
        spread_is_lambda: bool = False,
    ) -> Dict[str, CounterpartyProfile]:
        """
        Counterparty profiles of every netting set.

        Raises:
            ConfigError: a counterparty has no entry and no default rating is given,
                or its rating is unknown
        """
        profiles = {}
        for counterparty_id in self.netting_sets:
            ref = self.counterparties.get(counterparty_id)
            if ref is None:
                if default_rating is None:
                    raise ConfigError(Messages.UNKNOWN_COUNTERPARTY.format(counterparty=counterparty_id))
                ref = CounterpartyRef(counterparty_id, default_rating)
            profiles[counterparty_id] = counterparty_for(
                table,
                ref.rating,
                counterparty_id=counterparty_id,
                recovery=ref.recovery,
                domicile_exempt=ref.domicile_exempt,
                spread_is_lambda=spread_is_lambda,
            )
        return profiles


def _to_float(entry: Mapping[str, Any], name: str, index: int, kind: str) -> float:
    raw = entry[name]
    try:
        if isinstance(raw, bool):
            raise TypeError
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(Messages.FIELD_INVALID.format(kind=kind, index=index, field=name, value=raw))


def _to_frequency(entry: Mapping[str, Any], name: str, index: int) -> int:
    value = _to_float(entry, name, index, "Trade")
    if not value.is_integer():
        raise ConfigError(Messages.FIELD_INVALID.format(kind="Trade", index=index, field=name, value=entry[name]))
    return int(value)


def _to_bool(raw: Any) -> bool:
    if isinstance(raw, str):
        return raw.strip().lower() in ("1", "true", "yes", "y")
    return bool(raw)


def parse_trade(entry: Mapping[str, Any], index: int, curve: DiscountCurve) -> SwapSpec:
    """
    Build a swap from a file entry; fixedRate "par" prices at today's par rate.

    Raises:
        ConfigError: missing or invalid field
    """
    for name in REQUIRED_TRADE_FIELDS:
        if entry.get(name) in (None, ""):
            raise ConfigError(Messages.FIELD_MISSING.format(kind="Trade", index=index, field=name))

    maturity = _to_float(entry, "maturityYears", index, "Trade")
    frequency = 2
    for name in ("freq", "payFrequency"):
        if entry.get(name) not in (None, ""):
            frequency = _to_frequency(entry, name, index)
            break
    raw_direction = str(entry.get("direction") or SwapDirection.PAYER.value).strip().lower()
    raw_direction = raw_direction.removesuffix("-fixed")
    try:
        direction = SwapDirection(raw_direction)
    except ValueError:
        raise ConfigError(Messages.FIELD_INVALID.format(
            kind="Trade", index=index, field="direction", value=entry.get("direction")
        ))

    try:
        if str(entry["fixedRate"]).strip().lower() == "par":
            fixed_rate = par_rate(curve, maturity, frequency)
        else:
            fixed_rate = _to_float(entry, "fixedRate", index, "Trade")
        return SwapSpec(
            trade_id=str(entry["id"]),
            counterparty_id=str(entry["counterpartyId"]),
            notional=_to_float(entry, "notional", index, "Trade"),
            fixed_rate=fixed_rate,
            maturity=maturity,
            pay_frequency=frequency,
            direction=direction,
            collateralized=_to_bool(entry.get("collateralized", False)),
        )
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"Trade entry {index}: {e}") from e


def parse_counterparty(entry: Mapping[str, Any], index: int) -> CounterpartyRef:
    for name in ("id", "rating"):
        if entry.get(name) in (None, ""):
            raise ConfigError(Messages.FIELD_MISSING.format(kind="Counterparty", index=index, field=name))
    recovery = (
        _to_float(entry, "recovery", index, "Counterparty")
        if entry.get("recovery") not in (None, "")
        else COUNTERPARTY_RECOVERY
    )
    return CounterpartyRef(
        counterparty_id=str(entry["id"]),
        rating=str(entry["rating"]).strip(),
        recovery=recovery,
        domicile_exempt=_to_bool(entry.get("domicileExempt", False)),
    )


def build_portfolio(
    trades: Sequence[Mapping[str, Any]],
    counterparties: Sequence[Mapping[str, Any]],
    curve: DiscountCurve,
) -> Portfolio:
    if not trades:
        raise ConfigError("Portfolio contains no trades")
    unknown = sorted({key for entry in trades for key in entry} - set(TRADE_FIELDS))
    if unknown:
        logger.warning(Messages.UNKNOWN_FIELDS.format(kind="Portfolio trades", fields=unknown))
    specs = [parse_trade(entry, i, curve) for i, entry in enumerate(trades)]
    refs = [parse_counterparty(entry, i) for i, entry in enumerate(counterparties)]
    return Portfolio(trades=specs, counterparties={ref.counterparty_id: ref for ref in refs})


def load_portfolio(path: Path, curve: DiscountCurve) -> Portfolio:
    """
    Read a portfolio from a .json or .xlsx file.

    Raises:
        ConfigError: missing file, unsupported format or malformed entries
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(Messages.FILE_NOT_FOUND.format(kind="Portfolio", path=path))

    if path.suffix.lower() == ".xlsx":
        valid, message = validate_portfolio_workbook(path)
        if not valid:
            raise ConfigError(f"Portfolio workbook {path}: {message}")
        trades, counterparties = read_portfolio_workbook(path)
    else:
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(Messages.FILE_UNREADABLE.format(kind="portfolio", path=path, error=e)) from e
        if isinstance(document, list):
            trades, counterparties = document, []
        else:
            trades = document.get("trades", [])
            counterparties = document.get("counterparties", [])

    portfolio = build_portfolio(trades, counterparties, curve)
    logger.info(
        f"Loaded {len(portfolio.trades)} trades in {len(portfolio.netting_sets)} netting sets from {path}"
    )
    return portfolio
