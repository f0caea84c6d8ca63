"""
Regulatory capital package.

- market_risk: standardized maturity-method ladder
- ccr: IRB weights, effective maturity and counterparty credit risk capital
- cva_capital: standardized CVA charge, regulatory CVA and CS01
- profile: counterparty data, capital configuration and capital profiles
"""

from src.regcap.ccr import (
    ccr_capital,
    effective_maturity_cva,
    effective_maturity_irb,
    irb_weight,
    standardized_capital_weight,
)
from src.regcap.cva_capital import (
    CvaCapitalInput,
    cva_capital_std_full,
    cva_capital_std_large_n,
    ead_discount_factor,
    regulatory_cs01,
    regulatory_cva,
)
from src.regcap.market_risk import (
    LadderBreakdown,
    LadderPosition,
    ladder_charge,
    market_risk_breakdown,
    market_risk_std,
    offset_matched_positions,
    positions_for_swap,
)
from src.regcap.profile import (
    CapitalConfig,
    CapitalProfile,
    CounterpartyProfile,
    attribute_market_risk,
    build_capital_profile,
    market_risk_profile,
)

__all__ = [
    "ccr_capital",
    "effective_maturity_cva",
    "effective_maturity_irb",
    "irb_weight",
    "standardized_capital_weight",
    "CvaCapitalInput",
    "cva_capital_std_full",
    "cva_capital_std_large_n",
    "ead_discount_factor",
    "regulatory_cs01",
    "regulatory_cva",
    "LadderBreakdown",
    "LadderPosition",
    "ladder_charge",
    "market_risk_breakdown",
    "market_risk_std",
    "offset_matched_positions",
    "positions_for_swap",
    "CapitalConfig",
    "CapitalProfile",
    "CounterpartyProfile",
    "attribute_market_risk",
    "build_capital_profile",
    "market_risk_profile",
]
