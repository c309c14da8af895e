"""Exception hierarchy shared across the package.

CLI exit codes: ConfigError -> 2, DataError -> 3, SolverError -> 4.
"""


class EdgeclustError(Exception):
    pass


class ConfigError(EdgeclustError):
    """Invalid parameters or option combinations."""


class DataError(EdgeclustError):
    """Malformed, inconsistent, or out-of-contract input data."""


class SolverError(EdgeclustError):
    """Optimization failed to converge within its budget."""
