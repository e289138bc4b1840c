"""Exception types shared across the package."""


class NsgmsError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(NsgmsError, ValueError):
    """An argument is outside its documented domain."""


class ConstructionFailure(NsgmsError):
    """A random model could not be built with the requested parameters."""


class NotPositiveDefiniteError(NsgmsError):
    """A matrix that must be symmetric positive definite is not."""


class InfeasibleConfigError(NsgmsError):
    """Estimator configuration cannot be satisfied on the given data."""


class DimensionMismatchError(NsgmsError, ValueError):
    """Array shapes are inconsistent."""


class DegenerateFormError(NsgmsError, ValueError):
    """A quadratic form with both coefficient vectors zero."""


class FormatError(NsgmsError):
    """A serialized model/sample/config file is malformed."""


class ConfigError(NsgmsError):
    """An experiment configuration file is invalid."""


class TrendViolationError(NsgmsError):
    """Error-rate curve fails the expected monotone trend."""
