"""
Report service - renders result tables as CSV and optional xlsx workbooks.
"""

import sys
from pathlib import Path
from typing import Mapping, Optional, TextIO

import pandas as pd

from src.constants import Messages
from src.excel_handler import write_tables_workbook
from src.logger import setup_logger

logger = setup_logger(__name__)

# Fixed precision keeps repeated runs byte-identical
FLOAT_FORMAT = "%.6f"


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_table(
    frame: pd.DataFrame,
    output: Optional[Path] = None,
    xlsx: Optional[Path] = None,
    sheet: str = "results",
    stream: Optional[TextIO] = None,
) -> None:
    """Write a table as CSV to `output` (stdout when omitted) and optionally to xlsx."""
    text = to_csv(frame)
    if output is None:
        (stream or sys.stdout).write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(Messages.TABLE_WRITTEN.format(rows=len(frame), target=output))
    if xlsx is not None:
        write_tables_workbook({sheet: frame}, Path(xlsx))


def write_profiles(frames: Mapping[str, pd.DataFrame], directory: Path) -> None:
    """One CSV per netting set: <directory>/profile_<netting set>.csv."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, frame in frames.items():
        target = directory / f"profile_{name}.csv"
        target.write_text(to_csv(frame), encoding="utf-8")
        logger.info(Messages.TABLE_WRITTEN.format(rows=len(frame), target=target))
