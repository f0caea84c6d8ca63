"""
Capital service - standalone regulatory capital of each netting set at one time.
"""

from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from src.constants import CapitalReportColumns
from src.logger import setup_logger
from src.models import MarketEnvironment
from src.regcap import (
    CapitalConfig,
    CvaCapitalInput,
    cva_capital_std_full,
    effective_maturity_cva,
    regulatory_cs01,
    regulatory_cva,
)
from src.services.pricing_service import NettingSetResult, PortfolioResult

logger = setup_logger(__name__)


def _cva_input(item: NettingSetResult, t: float, idx: int, config: CapitalConfig) -> Optional[CvaCapitalInput]:
    if item.counterparty.domicile_exempt or item.exposure.collateralized:
        return None
    live = [spec for spec in item.exposure.trades if spec.maturity - t > 1e-9]
    if not live:
        return None
    maturity = effective_maturity_cva([s.maturity - t for s in live], [s.notional for s in live])
    ead = float(item.exposure.ead[config.ead_method].expected[idx])
    return CvaCapitalInput(weight=item.counterparty.cva_weight, maturity=maturity, ead=ead)


def _regulatory_cva_and_cs01(
    item: NettingSetResult,
    environment: MarketEnvironment,
    lgd: Optional[float],
) -> tuple:
    times = item.exposure.time_grid
    market_lgd = lgd if lgd is not None else 1.0 - item.counterparty.recovery
    spreads = np.full(times.shape, item.counterparty.cds_spread)
    ee = item.exposure.undiscounted_ee
    discount = environment.curve.discount_factor(times)
    cva = regulatory_cva(spreads, times, market_lgd, ee, discount)
    cs01 = sum(
        regulatory_cs01(spreads, times, market_lgd, ee, discount, bucket)
        for bucket in range(1, times.size - 1)
    )
    return cva, cs01


def capital_report(
    result: PortfolioResult,
    environment: MarketEnvironment,
    config: CapitalConfig,
    t: float = 0.0,
    lgd: Optional[float] = None,
) -> pd.DataFrame:
    """
    EADs and capital per netting set at the grid time nearest to `t`, with
    the full standardized CVA charge and the advanced-method CVA and CS01.
    The TOTAL row carries the full CVA charge over all netting sets.
    """
    first = next(iter(result.netting_sets.values()))
    times = first.exposure.time_grid
    idx = int(np.argmin(np.abs(times - t)))
    t_grid = float(times[idx])

    rows: List[Dict[str, object]] = []
    cva_inputs = []
    for name, item in result.netting_sets.items():
        cva_input = _cva_input(item, t_grid, idx, config)
        if cva_input is not None:
            cva_inputs.append(cva_input)
        reg_cva, cs01 = _regulatory_cva_and_cs01(item, environment, lgd)
        rows.append({
            CapitalReportColumns.NETTING_SET: name,
            CapitalReportColumns.RATING: item.counterparty.rating,
            CapitalReportColumns.TIME: t_grid,
            CapitalReportColumns.EAD_CEM: float(item.exposure.ead_cem[idx]),
            CapitalReportColumns.EAD_STD: float(item.exposure.ead_std[idx]),
            CapitalReportColumns.EAD_IMM: float(item.exposure.ead_imm[idx]),
            CapitalReportColumns.K_MR: float(item.capital.k_mr[idx]),
            CapitalReportColumns.K_CCR: float(item.capital.k_ccr[idx]),
            CapitalReportColumns.K_CVA: float(item.capital.k_cva[idx]),
            CapitalReportColumns.K_CVA_FULL: cva_capital_std_full(
                [cva_input] if cva_input else [], config.horizon
            ),
            CapitalReportColumns.REGULATORY_CVA: reg_cva,
            CapitalReportColumns.CS01: cs01,
        })

    frame = pd.DataFrame(rows, columns=CapitalReportColumns.ALL)
    total = {c: frame[c].sum() for c in CapitalReportColumns.ALL[3:]}
    total.update({
        CapitalReportColumns.NETTING_SET: "TOTAL",
        CapitalReportColumns.RATING: "",
        CapitalReportColumns.TIME: t_grid,
        CapitalReportColumns.K_CVA_FULL: cva_capital_std_full(cva_inputs, config.horizon),
    })
    logger.info(f"Capital report at t={t_grid:.4f} over {len(rows)} netting sets")
    return pd.concat([frame, pd.DataFrame([total], columns=CapitalReportColumns.ALL)], ignore_index=True)
