import openpyxl
import pandas as pd
import pytest

from src.errors import ConfigError
from src.excel_handler import (
    COUNTERPARTIES_SHEET,
    TRADES_SHEET,
    create_sample_workbook,
    read_portfolio_workbook,
    validate_portfolio_workbook,
    write_tables_workbook,
)
from src.services import load_portfolio


@pytest.fixture
def sample(tmp_path):
    path = tmp_path / "portfolio.xlsx"
    create_sample_workbook(path)
    return path


def test_sample_workbook_is_valid(sample):
    assert validate_portfolio_workbook(sample) == (True, "")


def test_read_rows(sample):
    trades, counterparties = read_portfolio_workbook(sample)
    assert [t["id"] for t in trades] == ["T1", "T2", "H1"]
    assert trades[0]["fixedRate"] == "par"
    assert {c["id"]: c["rating"] for c in counterparties} == {"C-AAA": "AAA", "C-BB": "BB", "dealer": "AAA"}


def test_blank_rows_are_skipped(sample):
    wb = openpyxl.load_workbook(sample)
    wb[TRADES_SHEET].append([None] * 8)
    wb[TRADES_SHEET].append(["T9", "C-BB", 100, 0.02, 2, 2, "payer", False])
    wb.save(sample)
    trades, _ = read_portfolio_workbook(sample)
    assert [t["id"] for t in trades][-1] == "T9"
    assert len(trades) == 4


def test_portfolio_from_workbook(sample, environment, rating_table):
    portfolio = load_portfolio(sample, environment.curve)
    assert list(portfolio.netting_sets) == ["C-AAA", "C-BB", "dealer"]
    assert portfolio.trades[2].collateralized
    assert portfolio.profiles(rating_table)["dealer"].domicile_exempt


def test_missing_required_column(tmp_path):
    path = tmp_path / "bad.xlsx"
    wb = openpyxl.Workbook()
    wb.active.title = TRADES_SHEET
    wb.active.append(["id", "counterpartyId", "notional"])
    wb.save(path)
    valid, message = validate_portfolio_workbook(path)
    assert not valid
    assert "fixedRate" in message and "maturityYears" in message


def test_trades_sheet_falls_back_to_active(tmp_path):
    path = tmp_path / "plain.xlsx"
    wb = openpyxl.Workbook()
    wb.active.append(["id", "counterpartyId", "notional", "fixedRate", "maturityYears"])
    wb.active.append(["T1", "C1", 1000, 0.02, 5])
    wb.save(path)
    trades, counterparties = read_portfolio_workbook(path)
    assert trades == [{"id": "T1", "counterpartyId": "C1", "notional": 1000, "fixedRate": 0.02, "maturityYears": 5}]
    assert counterparties == []


def test_unreadable_workbook(tmp_path):
    path = tmp_path / "broken.xlsx"
    path.write_bytes(b"not a workbook")
    with pytest.raises(ConfigError):
        read_portfolio_workbook(path)
    valid, _ = validate_portfolio_workbook(path)
    assert not valid


def test_write_tables(tmp_path):
    path = tmp_path / "tables.xlsx"
    frame = pd.DataFrame({"rating": ["AAA", "BB"], "cva_bp": [-1.5, float("nan")]})
    write_tables_workbook({"naked": frame, COUNTERPARTIES_SHEET: frame.head(1)}, path)

    wb = openpyxl.load_workbook(path)
    assert wb.sheetnames == ["naked", COUNTERPARTIES_SHEET]
    ws = wb["naked"]
    assert [c.value for c in ws[1]] == ["rating", "cva_bp"]
    assert ws["A1"].font.bold
    assert ws["B2"].value == -1.5
    assert ws["B3"].value is None
