"""
Column names of the tables written by the pricer.
Centralized so that CSV and xlsx outputs stay consistent.
Every numeric header carries its unit: bp, pct, y (years) or ccy (currency).
"""


class Columns:
    """Result table columns (adjustments in bp of trade notional)."""
    PHI = "phi"
    SWAP = "swap"
    RATING = "rating"
    NETTING_SET = "netting_set"
    CVA = "cva_bp"
    DVA = "dva_bp"
    FCA = "fca_bp"
    COLVA = "colva_bp"
    KVA_MR = "kva_mr_bp"
    KVA_CCR = "kva_ccr_bp"
    KVA_CVA = "kva_cva_bp"
    KVA = "kva_bp"
    TOTAL = "total_bp"
    IR01 = "ir01_bp"
    HEDGE_CHANGE = "hedge_change_pct"
    HEDGE_MULTIPLIER = "hedge_multiplier"

    TABLE = [PHI, SWAP, RATING, CVA, DVA, FCA, KVA_MR, KVA_CCR, KVA_CVA, TOTAL, IR01]
    HEDGE = [HEDGE_CHANGE, HEDGE_MULTIPLIER]
    PRICE = [NETTING_SET, PHI, CVA, DVA, FCA, COLVA, KVA_MR, KVA_CCR, KVA_CVA, KVA, TOTAL]


class ProfileColumns:
    """Exposure profile export columns."""
    TIME = "time_y"
    EPE = "epe_ccy"
    ENE = "ene_ccy"
    EAD_CEM = "ead_cem_ccy"
    EAD_STD = "ead_std_ccy"
    EAD_IMM = "ead_imm_ccy"
    EPE_STDERR = "epe_stderr_ccy"
    ENE_STDERR = "ene_stderr_ccy"

    ALL = [TIME, EPE, ENE, EAD_CEM, EAD_STD, EAD_IMM, EPE_STDERR, ENE_STDERR]


class CapitalColumns:
    """Capital profile export columns."""
    TIME = "time_y"
    K_MR = "k_mr_ccy"
    K_CCR = "k_ccr_ccy"
    K_CVA = "k_cva_ccy"
    K_TOTAL = "k_total_ccy"

    ALL = [TIME, K_MR, K_CCR, K_CVA, K_TOTAL]


class CapitalReportColumns:
    """Standalone capital report columns at one valuation time."""
    NETTING_SET = "netting_set"
    RATING = "rating"
    TIME = "time_y"
    EAD_CEM = "ead_cem_ccy"
    EAD_STD = "ead_std_ccy"
    EAD_IMM = "ead_imm_ccy"
    K_MR = "k_mr_ccy"
    K_CCR = "k_ccr_ccy"
    K_CVA = "k_cva_ccy"
    K_CVA_FULL = "k_cva_full_ccy"
    REGULATORY_CVA = "regulatory_cva_ccy"
    CS01 = "cs01_ccy_per_bp"

    ALL = [NETTING_SET, RATING, TIME, EAD_CEM, EAD_STD, EAD_IMM,
           K_MR, K_CCR, K_CVA, K_CVA_FULL, REGULATORY_CVA, CS01]


class PdeCheckColumns:
    """PDE against quadrature cross-check columns (adjustment values in currency)."""
    PDE = "pde_ccy"
    QUADRATURE = "quadrature_ccy"
    STDERR = "stderr_ccy"
    DIFFERENCE = "difference_ccy"
    TOLERANCE = "tolerance_ccy"
    PASSED = "passed"
