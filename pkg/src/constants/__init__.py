"""
Constants package for the pricer.

This package organizes all constants into logical modules:
- enums: Directions, scenario kinds and method selectors
- columns: Table column names for CSV and xlsx output
- messages: Log and error message templates
"""

from src.constants.enums import (
    EadMethod,
    Ir01Convention,
    LegKind,
    ScenarioKind,
    SwapDirection,
    WeightMethod,
)
from src.constants.columns import (
    CapitalColumns,
    CapitalReportColumns,
    Columns,
    PdeCheckColumns,
    ProfileColumns,
)
from src.constants.messages import Messages

__all__ = [
    "EadMethod",
    "Ir01Convention",
    "LegKind",
    "ScenarioKind",
    "SwapDirection",
    "WeightMethod",
    "CapitalColumns",
    "CapitalReportColumns",
    "Columns",
    "PdeCheckColumns",
    "ProfileColumns",
    "Messages",
]
