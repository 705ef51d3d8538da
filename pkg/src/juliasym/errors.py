"""Exception types raised across the package."""


class JuliaSymError(Exception):
    """Base class for all package errors."""


class ZeroPair(JuliaSymError, ValueError):
    pass


class IdentityHasNoAxis(JuliaSymError, ValueError):
    pass


class NotAGroup(JuliaSymError, ValueError):
    pass


class UnrecognizedOrder(JuliaSymError, ValueError):
    pass


class NoConvergence(JuliaSymError, ArithmeticError):
    pass


class DegenerateInput(JuliaSymError, ValueError):
    pass


class PreimageFailure(JuliaSymError, ArithmeticError):
    pass


class InvalidWindow(JuliaSymError, ValueError):
    pass


class SampleCollision(JuliaSymError, ValueError):
    pass


class NotInBasin(JuliaSymError, ValueError):
    pass


class NotSuperattracting(JuliaSymError, ValueError):
    pass


class DoesNotFixPoint(JuliaSymError, ValueError):
    pass


class InvalidExponents(JuliaSymError, ValueError):
    pass


class MissingEscapeRadius(JuliaSymError, ValueError):
    pass


class InconclusiveClassification(JuliaSymError):
    """Numeric evidence too close to the tolerance to decide."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(JuliaSymError, ValueError):
    """Malformed map or isometry specification; ``position`` is a 0-based offset."""

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
            if text is not None:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)
