"""Configuration module for the pricer"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Base directory
BASE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = BASE_DIR / "src" / "data"

# Runtime Settings
XVA_THREADS = max(1, int(os.getenv("XVA_THREADS", str(os.cpu_count() or 1))))
LOG_LEVEL = os.getenv("XVA_LOG_LEVEL", "INFO").upper()
LOG_DIR = Path(os.getenv("XVA_LOG_DIR", "logs"))
LOG_TO_FILE = os.getenv("XVA_LOG_TO_FILE", "1") != "0"
RATING_TABLE_FILE = Path(os.getenv("XVA_RATING_TABLE", str(DATA_DIR / "rating_weights.json")))

# Market defaults
HW_MEAN_REVERSION = 0.05
HW_VOLATILITY = 0.01
DEFAULT_PAR_RATE = 0.027          # 10y semi-annual par swap rate of the default curve
DEFAULT_CURVE_MATURITY = 10.0
DEFAULT_SEED = 20140101

# Simulation
GRID_STEP_MONTHS = 1
DEFAULT_PATHS = 10_000
MIN_TABLE_PATHS = 1_000
PATH_BLOCK_SIZE = 1024

# Issuer (the bank)
ISSUER_SPREAD = 0.01              # bond spread s_B = (1 - R_B) * lambda_B
ISSUER_RECOVERY = 0.4
COLLATERAL_SPREAD = 0.0
COUNTERPARTY_RECOVERY = 0.4

# Capital
CAPITAL_RATIO = 0.08
COST_OF_CAPITAL = 0.10
CVA_HORIZON = 1.0
FIRB_LGD = 0.45
PD_FLOOR = 0.0003
CVA_CONFIDENCE = 2.33

# Current Exposure Method add-ons by residual maturity (upper bound in years -> add-on)
CEM_ADDONS = {
    1.0: 0.0,            # one year or less
    5.0: 0.005,          # over one year to five years
    float("inf"): 0.015,  # over five years
}
CEM_NETTING_WEIGHT = 0.6

# Standardized EAD: supervisory scaling and credit conversion factors per risk class
STANDARDIZED_BETA = 1.4
STANDARDIZED_CCF = {
    "high": 0.006,
    "low": 0.003,
    "other": 0.002,
}

# IMM
IMM_ALPHA = 1.4
IMM_HORIZON = 1.0

# PDE defaults
PDE_PICARD_TOLERANCE = 1e-10
PDE_PICARD_MAX_SWEEPS = 20
PDE_RANNACHER_STEPS = 2

# IR01 bump size in basis points
IR01_BUMP_BP = 1.0
