"""
Rating service - loads the rating weight table and builds counterparty profiles.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional

from src.config import COUNTERPARTY_RECOVERY, PD_FLOOR, RATING_TABLE_FILE
from src.constants import Messages
from src.errors import ConfigError
from src.logger import setup_logger
from src.regcap import CounterpartyProfile

logger = setup_logger(__name__)

SUPPORTED_TABLE_VERSIONS = (1,)
HEDGE_COUNTERPARTY = "hedge"


@dataclass(frozen=True)
class RatingEntry:
    rating: str
    cds_spread: float
    ccr_risk_weight: float
    cva_weight: float
    pd: Optional[float] = None


RatingTable = Dict[str, RatingEntry]


def _field(entry: dict, name: str, rating: str, optional: bool = False):
    if name not in entry:
        if optional:
            return None
        raise ConfigError(Messages.FIELD_MISSING.format(kind="Rating", index=rating, field=name))
    raw = entry[name]
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or raw < 0:
        raise ConfigError(Messages.FIELD_INVALID.format(kind="Rating", index=rating, field=name, value=raw))
    return float(raw)


def load_rating_table(path: Path = RATING_TABLE_FILE) -> RatingTable:
    """
    Load a versioned rating table.

    Raises:
        ConfigError: missing file, malformed document or unsupported version
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(Messages.FILE_NOT_FOUND.format(kind="Rating table", path=path))
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(Messages.FILE_UNREADABLE.format(kind="rating table", path=path, error=e)) from e

    version = document.get("version")
    if version not in SUPPORTED_TABLE_VERSIONS:
        raise ConfigError(Messages.TABLE_VERSION.format(version=version, path=path))

    table: RatingTable = {}
    for rating, entry in document.get("ratings", {}).items():
        pd_value = _field(entry, "pd", rating, optional=True)
        table[rating] = RatingEntry(
            rating=rating,
            cds_spread=_field(entry, "cdsSpreadBp", rating) * 1e-4,
            ccr_risk_weight=_field(entry, "ccrRiskWeight", rating),
            cva_weight=_field(entry, "cvaWeight", rating),
            pd=None if pd_value is None else max(pd_value, PD_FLOOR),
        )
    if not table:
        raise ConfigError(f"Rating table {path} defines no ratings")
    logger.info(f"Loaded {len(table)} ratings from {path}")
    return table


def counterparty_for(
    table: RatingTable,
    rating: str,
    counterparty_id: Optional[str] = None,
    recovery: float = COUNTERPARTY_RECOVERY,
    domicile_exempt: bool = False,
    spread_is_lambda: bool = False,
) -> CounterpartyProfile:
    """
    Counterparty profile for a rating.

    Raises:
        ConfigError: if the rating is not in the table
    """
    entry = table.get(rating)
    if entry is None:
        raise ConfigError(Messages.UNKNOWN_RATING.format(rating=rating, known=", ".join(table)))
    return CounterpartyProfile(
        counterparty_id=counterparty_id or rating,
        rating=rating,
        cds_spread=entry.cds_spread,
        ccr_risk_weight=entry.ccr_risk_weight,
        cva_weight=entry.cva_weight,
        recovery=recovery,
        pd=entry.pd,
        domicile_exempt=domicile_exempt,
        spread_is_lambda=spread_is_lambda,
    )


def hedge_counterparty(counterparty_id: str = HEDGE_COUNTERPARTY) -> CounterpartyProfile:
    """Hedge dealer under a perfect CSA: no default risk, no capital weights."""
    return CounterpartyProfile(
        counterparty_id=counterparty_id,
        rating="CSA",
        cds_spread=0.0,
        ccr_risk_weight=0.0,
        cva_weight=0.0,
        pd=PD_FLOOR,
    )
