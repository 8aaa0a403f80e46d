"""Exception hierarchy. Each family carries the CLI exit code it maps to."""

from typing import Optional


class LauricellaError(Exception):
    exit_code = 1


class ValidationFailure(LauricellaError):
    exit_code = 2


class ParseError(ValidationFailure):
    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"position {position}: {message}"
        super().__init__(message)


class InvalidWeightsError(ValidationFailure):
    pass


class CaseError(ValidationFailure):
    """Analysis requested for a weight system of the wrong case."""


class MalformedPartitionError(ValidationFailure):
    pass


class InvalidIndexError(ValidationFailure):
    pass


class DimensionMismatchError(ValidationFailure):
    pass


class ConfigurationError(ValidationFailure):
    pass


class NotRealError(ValidationFailure):
    pass


class InvalidConfigurationError(ValidationFailure):
    """Point configuration or finite-difference step rejected."""


class NumericalFailure(LauricellaError):
    exit_code = 3


class PrecisionError(NumericalFailure):
    pass


class QuadratureError(NumericalFailure):
    pass


class ToleranceError(NumericalFailure):
    pass


class SchwarzMapError(NumericalFailure):
    pass


class ResourceCapError(LauricellaError):
    exit_code = 4


class ConductorOverflowError(ResourceCapError):
    pass


class ClosureBoundError(ResourceCapError):
    pass


class DenominatorCapError(ResourceCapError):
    pass


class CyclotomicZeroDivisionError(ZeroDivisionError, LauricellaError):
    exit_code = 2
