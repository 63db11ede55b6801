"""Exception hierarchy shared by all chaosboot modules."""


class ChaosbootError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ChaosbootError):
    """A state fell outside the support of the map."""


class ParameterError(ChaosbootError):
    """A map or algorithm parameter is out of its valid range."""


class InsufficientDataError(ChaosbootError):
    """A spline segment has fewer points than its kind requires."""


class DegenerateDataError(ChaosbootError):
    """The data carry no usable spread (all points identical, s = 0, ...)."""


class RetryCapError(ChaosbootError):
    """A rejection-sampling loop exceeded its redraw cap."""


class ScaleError(ChaosbootError):
    """A scale quantity that must be positive is zero or negative."""


class ConfigError(ChaosbootError):
    """Invalid configuration file or CLI arguments."""
