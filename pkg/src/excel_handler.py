"""Excel workbook handling for portfolio import and table export"""

from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple

import openpyxl
import pandas as pd
from openpyxl.styles import Font

from src.constants import Messages
from src.errors import ConfigError
from src.logger import setup_logger

logger = setup_logger(__name__)

TRADES_SHEET = "trades"
COUNTERPARTIES_SHEET = "counterparties"
TRADE_HEADERS = [
    "id", "counterpartyId", "notional", "fixedRate", "maturityYears",
    "freq", "direction", "collateralized",
]
COUNTERPARTY_HEADERS = ["id", "rating", "recovery", "domicileExempt"]
MAX_COLUMN_WIDTH = 50


def _sheet_rows(ws) -> List[Dict[str, Any]]:
    """Rows below the header as dicts keyed by header text; blank rows are skipped."""
    headers = {}
    for idx, cell in enumerate(ws[1], start=1):
        if cell.value:
            headers[str(cell.value).strip()] = idx

    rows = []
    for row_idx in range(2, ws.max_row + 1):
        row = {name: ws.cell(row_idx, col).value for name, col in headers.items()}
        if all(value in (None, "") for value in row.values()):
            continue
        rows.append(row)
    return rows


def read_portfolio_workbook(file_path: Path) -> Tuple[List[Dict[str, Any]], List[Dict[str, Any]]]:
    """
    Read trade and counterparty rows from a portfolio workbook.

    The "trades" sheet (or the active sheet when there is none) is required;
    the "counterparties" sheet is optional.

    Returns:
        Tuple of (trade rows, counterparty rows)

    Raises:
        ConfigError: unreadable workbook or missing trades sheet
    """
    logger.info(f"Reading portfolio workbook {file_path}")
    try:
        wb = openpyxl.load_workbook(file_path, read_only=False, data_only=True)
    except Exception as e:
        raise ConfigError(Messages.FILE_UNREADABLE.format(kind="portfolio", path=file_path, error=e)) from e

    ws = wb[TRADES_SHEET] if TRADES_SHEET in wb.sheetnames else wb.active
    if ws is None:
        raise ConfigError(f"Portfolio workbook {file_path} has no trades sheet")

    trades = _sheet_rows(ws)
    counterparties = (
        _sheet_rows(wb[COUNTERPARTIES_SHEET]) if COUNTERPARTIES_SHEET in wb.sheetnames else []
    )
    logger.info(f"Read {len(trades)} trade rows and {len(counterparties)} counterparty rows")
    return trades, counterparties


def validate_portfolio_workbook(file_path: Path) -> Tuple[bool, str]:
    """
    Check that a workbook has a trades sheet with the required headers.

    Returns:
        Tuple of (is_valid, error_message); the message is empty when valid
    """
    try:
        wb = openpyxl.load_workbook(file_path)
        ws = wb[TRADES_SHEET] if TRADES_SHEET in wb.sheetnames else wb.active
        if ws is None or ws.max_row < 1:
            return False, "Workbook has no trades sheet"
        headers = {str(cell.value).strip() for cell in ws[1] if cell.value}
        missing = [h for h in TRADE_HEADERS[:5] if h not in headers]
        if missing:
            return False, f"Missing required column(s): {', '.join(missing)}"
        return True, ""
    except Exception as e:
        error_msg = f"Error reading workbook: {e}"
        logger.error(error_msg)
        return False, error_msg


def _write_sheet(ws, headers: List[str], rows: List[List[Any]]) -> None:
    for idx, header in enumerate(headers, start=1):
        cell = ws.cell(1, idx)
        cell.value = header
        cell.font = Font(bold=True)

    for row_idx, row_data in enumerate(rows, start=2):
        for col_idx, value in enumerate(row_data, start=1):
            ws.cell(row_idx, col_idx).value = value

    # Auto-adjust column widths
    for column in ws.columns:
        max_length = 0
        column_letter = column[0].column_letter
        for cell in column:
            if cell.value is not None:
                max_length = max(max_length, len(str(cell.value)))
        ws.column_dimensions[column_letter].width = min(max_length + 2, MAX_COLUMN_WIDTH)


def write_tables_workbook(tables: Mapping[str, pd.DataFrame], file_path: Path) -> None:
    """Write each frame to its own sheet with bold headers and sized columns."""
    wb = openpyxl.Workbook()
    wb.remove(wb.active)
    for name, frame in tables.items():
        ws = wb.create_sheet(name[:31])
        rows = [
            [None if pd.isna(v) else (v.item() if hasattr(v, "item") else v) for v in record]
            for record in frame.itertuples(index=False, name=None)
        ]
        _write_sheet(ws, [str(c) for c in frame.columns], rows)
    wb.save(file_path)
    logger.info(Messages.TABLE_WRITTEN.format(rows=sum(len(f) for f in tables.values()), target=file_path))


def create_sample_workbook(file_path: Path) -> None:
    """Create a sample portfolio workbook with one netting set per rating."""
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = TRADES_SHEET
    _write_sheet(ws, TRADE_HEADERS, [
        ["T1", "C-AAA", 1_000_000, "par", 10, 2, "payer", False],
        ["T2", "C-BB", 1_000_000, 0.03, 5, 2, "receiver", False],
        ["H1", "dealer", 1_000_000, "par", 10, 2, "receiver", True],
    ])
    _write_sheet(wb.create_sheet(COUNTERPARTIES_SHEET), COUNTERPARTY_HEADERS, [
        ["C-AAA", "AAA", 0.4, False],
        ["C-BB", "BB", 0.4, False],
        ["dealer", "AAA", 0.4, True],
    ])
    wb.save(file_path)
    logger.info(f"Created sample portfolio workbook at {file_path}")
