"""Typed failures raised by the numerical kernels.

Every error derives from :class:`NumericalError` so callers that only want
to know "did the number come out" can catch one type.
"""


class NumericalError(ArithmeticError):
    """Base class for all numerical failures in this package."""


class DomainError(NumericalError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class PoleError(DomainError):
    """An argument sits within the integer-detection threshold of a pole."""


class ConvergenceError(NumericalError):
    """A series, continued fraction or quadrature ran out of iterations."""


class DivergenceError(DomainError):
    """The requested integral does not exist (non-integrable configuration)."""


class InstabilityError(NumericalError):
    """A computed value is unusable because of catastrophic cancellation."""


class ToleranceError(NumericalError):
    """A quadrature could not meet its tolerance; ``best`` holds its estimate."""

    def __init__(self, message, best=None, error=None):
        super().__init__(message)
        self.best = best
        self.error = error
