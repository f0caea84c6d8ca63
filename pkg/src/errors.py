"""Exception hierarchy shared by the library and the command line."""


class XvaError(Exception):
    """Root of all pricer errors."""

    exit_code = 1


class ConfigError(XvaError, ValueError):
    """Missing or malformed input files and out-of-range settings."""

    exit_code = 2


class NumericalError(XvaError, ArithmeticError):
    """A numerical procedure failed to converge or to bracket a root."""

    exit_code = 3

    def __init__(self, module: str, message: str):
        self.module = module
        super().__init__(f"[{module}] {message}")
