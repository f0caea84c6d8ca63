"""Shared fixtures: default market, a client swap and a modest path set."""

import os

os.environ.setdefault("XVA_LOG_TO_FILE", "0")
os.environ.setdefault("XVA_LOG_LEVEL", "WARNING")

import pytest

from src.constants import SwapDirection
from src.curve_model import monthly_grid, simulate_paths
from src.instruments import SwapSpec, par_rate
from src.regcap import CounterpartyProfile
from src.services.market_service import default_environment
from src.services.rating_service import counterparty_for, load_rating_table

TEST_SEED = 7
NOTIONAL = 10_000.0


@pytest.fixture(scope="session")
def environment():
    return default_environment(seed=TEST_SEED)


@pytest.fixture(scope="session")
def model(environment):
    return environment.model


@pytest.fixture(scope="session")
def par(environment):
    return par_rate(environment.curve, 10.0, 2)


@pytest.fixture(scope="session")
def payer_swap(par):
    return SwapSpec("T1", "C1", NOTIONAL, par, 10.0, 2, SwapDirection.PAYER)


@pytest.fixture(scope="session")
def receiver_swap(par):
    return SwapSpec("T2", "C1", NOTIONAL, par, 10.0, 2, SwapDirection.RECEIVER)


@pytest.fixture(scope="session")
def paths(model):
    return simulate_paths(model, monthly_grid(10.0), 2048, TEST_SEED, max_workers=2)


@pytest.fixture(scope="session")
def rating_table():
    return load_rating_table()


@pytest.fixture(scope="session")
def bb_counterparty(rating_table):
    return counterparty_for(rating_table, "BB", "C1")


@pytest.fixture
def riskless_counterparty():
    return CounterpartyProfile("C1", "NR", cds_spread=0.0, ccr_risk_weight=1.0, cva_weight=0.02)
