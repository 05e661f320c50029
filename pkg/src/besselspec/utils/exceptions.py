"""Custom exceptions for the besselspec package."""


class BesselSpecError(Exception):
    """Base exception for all besselspec errors."""
    pass


class ValidationError(BesselSpecError):
    """Raised when input validation fails."""
    pass


class DomainError(ValidationError):
    """Raised when an argument lies outside a function's domain."""
    pass


class BranchError(ValidationError):
    """Raised when a value sits on a branch cut where the result is ambiguous."""
    pass


class IntegrabilityError(ValidationError):
    """Raised when a potential violates the integrability class an operation needs."""
    pass


class ConditionError(ValidationError):
    """Raised when no construction route for the non-principal solution applies."""
    pass


class RouteUnavailableError(ValidationError):
    """Raised when a requested m-function route cannot be used for a potential."""
    pass


class NumericalError(BesselSpecError):
    """Base class for failures of a numerical procedure."""
    pass


class ConvergenceError(NumericalError):
    """Raised when an iterative method fails to converge."""
    pass


class TruncationError(NumericalError):
    """Raised when a tail or truncation budget cannot be met."""
    pass


class PositivityError(NumericalError):
    """Raised when the reference solution of the Liouville transform has a zero."""
    pass


class UnwrapError(NumericalError):
    """Raised when the phase of the Jost function jumps too far between grid nodes."""
    pass


class WindowError(NumericalError):
    """Raised when eigenvalue brackets cannot be separated inside a window."""
    pass


class InconclusiveError(NumericalError):
    """Raised when limit-order estimates disagree."""
    pass


class BoundStateMismatchError(NumericalError):
    """Raised when shooting and Jost-zero bound-state counts disagree."""
    pass


class QuadratureError(NumericalError):
    """Raised when a quadrature cannot reach its tolerance."""
    pass
