import logging

import pytest

from src import config
from src.errors import ConfigError, NumericalError, XvaError
from src.logger import setup_logger


class TestErrors:
    def test_exit_codes(self):
        assert XvaError.exit_code == 1
        assert ConfigError.exit_code == 2
        assert NumericalError.exit_code == 3

    def test_config_error_is_value_error(self):
        with pytest.raises(ValueError):
            raise ConfigError("bad input")

    def test_numerical_error_names_module(self):
        error = NumericalError("pde_solver", "no convergence")
        assert error.module == "pde_solver"
        assert str(error) == "[pde_solver] no convergence"
        assert isinstance(error, ArithmeticError)


class TestLogger:
    def test_handlers_added_once(self):
        first = setup_logger("tests.runtime")
        second = setup_logger("tests.runtime")
        assert first is second
        assert len(first.handlers) == 1
        assert not first.propagate

    def test_level_from_environment(self):
        # conftest sets XVA_LOG_LEVEL=WARNING before the package is imported
        assert setup_logger("tests.level").level == logging.WARNING


class TestConfig:
    def test_defaults(self):
        assert config.XVA_THREADS >= 1
        assert config.RATING_TABLE_FILE.exists()
        assert config.MIN_TABLE_PATHS == 1000
        assert config.CEM_ADDONS[5.0] == 0.005
        assert config.STANDARDIZED_CCF["other"] == 0.002
