"""Exception hierarchy shared by every galg module."""

from __future__ import annotations


class GalgError(ValueError):
    """Base class for domain errors raised by galg."""

    code = "galg-error"


class InvalidOrderError(GalgError):
    code = "invalid-order"


class GroupSizeError(GalgError):
    code = "group-size"


class InvalidGroupError(GalgError):
    """A Cayley table that does not define a group."""

    code = "invalid-group"


class MalformedHomError(GalgError):
    code = "malformed-hom"


class GroupSpecError(GalgError):
    code = "group-spec"


class IncompatibleOperandsError(GalgError):
    code = "incompatible-operands"


class NotInvertibleError(GalgError):
    """Raised for non-units; ``witness`` is a nonzero h with f*h = 0 when one was found."""

    code = "not-invertible"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class OrderCapExceededError(GalgError):
    code = "order-cap-exceeded"


class WeightOutOfRangeError(GalgError):
    code = "weight-out-of-range"


class OddWeightRequiredError(GalgError):
    code = "odd-weight-required"


class SamplingFailureError(GalgError):
    code = "sampling-failure"

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class UnsupportedStructureError(GalgError):
    code = "unsupported-structure"


class UnsupportedFieldError(GalgError):
    code = "unsupported-field"


class SingularMatrixError(GalgError):
    code = "singular-matrix"


class DimensionError(GalgError):
    code = "dimension-mismatch"


class NotAUnitError(GalgError):
    code = "not-a-unit"


class InvalidParameterError(GalgError):
    code = "invalid-parameter"


class ParseError(GalgError):
    """Malformed text input; ``line`` is 1-based when known."""

    code = "parse-error"

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapacityError(GalgError):
    code = "capacity"


class InvalidErrorVectorError(GalgError):
    code = "invalid-error-vector"
