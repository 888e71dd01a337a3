"""Semantic exception hierarchy for the homsys package."""


class HomsysError(Exception):
    """Base class for all homsys errors."""


class DomainError(HomsysError, ValueError):
    """An argument violates a documented precondition."""


class InvalidProfileError(DomainError):
    """A log-scale profile violates the class-G axioms (Lipschitz, monotonicity, sign)."""


class IntegrationError(HomsysError, ArithmeticError):
    """A quadrature failed to converge.  Carries the partial sum, if any."""

    def __init__(self, message: str, partial: float | None = None):
        super().__init__(message)
        self.partial = partial


class DegenerateModelError(HomsysError, ValueError):
    """Every atom of the mixture is max or min, so all moment integrals vanish."""


class RegridRequiredError(HomsysError, RuntimeError):
    """The evolved law would leave the allocated grid; the caller must regrid."""


class ScheduleInfeasibleError(HomsysError, ArithmeticError):
    """The schedule equations have no solution at this n (n too small)."""


class ClampBudgetExceededError(HomsysError, RuntimeError):
    """Accumulated monotonicity clamping exceeded the permitted budget."""
