"""Exception types shared across the package."""


class CusumError(Exception):
    """Base class for all package errors."""


class InsufficientDataError(CusumError, ValueError):
    """Not enough samples for the requested operation."""


class DegenerateVarianceError(CusumError, ValueError):
    """Long-run variance estimate is zero or below the configured floor."""


class RangeError(CusumError, IndexError):
    pass


class UsageError(CusumError, RuntimeError):
    """An object was used in a state that does not allow the call."""


class ConfigError(CusumError, ValueError):
    """Invalid configuration value."""
