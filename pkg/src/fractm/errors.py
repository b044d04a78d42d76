"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RegimeError(DomainError):
    """Parameters fall outside the Trudinger-Moser regime an operation needs."""


class ResolutionError(ValueError):
    """A grid is too coarse to represent the requested object."""


class ConstraintError(ValueError):
    """A profile violates the norm constraint of a functional."""


class EvaluationError(ArithmeticError):
    """A quadrature integrand produced a non-finite value."""

    def __init__(self, message: str, radius: float):
        super().__init__(f"{message} (at r={radius!r})")
        self.radius = radius
