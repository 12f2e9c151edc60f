"""Exception types shared across the package."""


class CmfError(Exception):
    """Base class for errors raised by this package."""


class InvalidParameterError(CmfError, ValueError):
    """An argument is outside its documented domain."""


class ZeroEnergyError(CmfError, ValueError):
    """The template carries no energy on the band, so derived metrics are undefined."""


class DegenerateMeasurementError(CmfError, RuntimeError):
    """Every sampled location landed where the template spectrum vanishes."""


class NumericError(CmfError, ArithmeticError):
    """A numerical routine produced a non-finite value."""


class ConfigError(CmfError, ValueError):
    """An experiment configuration is malformed or inconsistent."""
