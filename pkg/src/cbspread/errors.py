"""Exception hierarchy shared by all modules."""


class CBSpreadError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CBSpreadError, ValueError):
    """Input does not describe a valid network, scenario or source pair."""


class ParseError(ValidationError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class AssumptionError(CBSpreadError):
    """The standing assumptions on (W, beta, gamma) do not hold."""


class NumericalError(CBSpreadError, ArithmeticError):
    pass


class DomainError(NumericalError, ValueError):
    """A closed form was evaluated outside its domain (gamma = 0, negative radicand)."""


class IterationLimitError(NumericalError):
    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (last residual {residual:.3e})")


class InconsistencyError(CBSpreadError):
    """Two independent routes to the same quantity disagree."""
