"""Exception hierarchy.

Input problems derive from :class:`InputError` (CLI exit code 2); everything
else is a :class:`ComputationError` (exit code 1).
"""


class CurveError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CurveError):
    pass


class ComputationError(CurveError):
    pass


class SchemaError(InputError):
    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class NonUnitDenominator(InputError):
    """Denominator of a rational function vanishes at t = 0."""


DenominatorNotUnit = NonUnitDenominator


class DegenerateInput(InputError):
    pass


class NoEquations(InputError):
    pass


class EquationsFailVerification(InputError):
    pass


class NotInvertible(ComputationError):
    pass


class OrderTooLow(ComputationError):
    pass


class NoStabilization(ComputationError):
    pass


class BoxExceedsModuli(ComputationError):
    pass


class NoNonZeroDivisor(ComputationError):
    pass


class ContainmentViolation(ComputationError):
    pass


class NotContained(ComputationError):
    pass


class CriteriaDisagree(ComputationError):
    pass
