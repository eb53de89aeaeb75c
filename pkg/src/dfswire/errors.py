"""Exception hierarchy.

Anything deriving from :class:`ValidationError` is a problem with the input
(the CLI maps it to exit status 2); :class:`NumericalError` is an internal
failure of an iterative routine (exit status 1).
"""


class DfsWireError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DfsWireError, ValueError):
    """Input violates a documented invariant."""


class ShapeError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class CapacityError(ValidationError):
    """A size limit was exceeded."""


class DegeneracyError(ValidationError):
    pass


class UnsupportedOperatorError(ValidationError):
    pass


class SchemaError(ValidationError):
    """Malformed JSON payload."""


class NumericalError(DfsWireError, ArithmeticError):
    pass
