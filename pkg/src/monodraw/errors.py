"""Exception hierarchy shared by all construction and verification routines."""


class MonodrawError(Exception):
    """Base class for every error raised by this package."""


class UsageError(MonodrawError, ValueError):
    """A caller violated a precondition (zero vector, u == v, wrong input class)."""


class ValidationError(MonodrawError, ValueError):
    """Input data is structurally inconsistent (bad rotation, disconnected graph)."""


class ClassificationError(MonodrawError, ValueError):
    """The graph does not belong to the class required by the operation."""


class PrecisionError(MonodrawError, ArithmeticError):
    """Double precision no longer provides the slack a construction needs."""


class ConvergenceError(MonodrawError, ArithmeticError):
    """An iterative solver failed to reach its tolerance."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = list(residuals or [])


class InvariantError(MonodrawError, AssertionError):
    """An internal invariant of a construction was violated."""
