"""
Enumerations shared across the pricer.
"""

from enum import Enum


class SwapDirection(str, Enum):
    """Direction of a swap from the bank's point of view (fixed leg)."""
    PAYER = "payer"
    RECEIVER = "receiver"

    @property
    def sign(self) -> float:
        """+1 for payer-fixed, -1 for receiver-fixed."""
        return 1.0 if self is SwapDirection.PAYER else -1.0

    def opposite(self) -> "SwapDirection":
        return SwapDirection.RECEIVER if self is SwapDirection.PAYER else SwapDirection.PAYER


class ScenarioKind(str, Enum):
    """Hedging strategies reproduced by the scenario runner."""
    NAKED = "naked"
    BACK_TO_BACK = "backToBack"
    IR01_FLAT = "ir01Flat"


class EadMethod(str, Enum):
    """Exposure-at-default methods available to the capital profile."""
    CEM = "cem"
    STANDARDIZED = "standardized"
    IMM = "imm"


class WeightMethod(str, Enum):
    """How the counterparty credit risk weight is obtained."""
    STANDARDIZED = "standardized"
    IRB = "irb"


class Ir01Convention(str, Enum):
    """
    Sign convention for the adjustment part of IR01.

    COST (default) bumps V - U, so adjustments are reported as charges.
    ECONOMIC bumps V + U, with adjustments as negative values.
    """
    ECONOMIC = "economic"
    COST = "cost"


class LegKind(str, Enum):
    """Leg type used when slotting positions into the maturity ladder."""
    FIXED = "fixed"
    FLOATING = "floating"
