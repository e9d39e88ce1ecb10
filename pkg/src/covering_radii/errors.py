"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DivergenceError(DomainError):
    """The requested value is an endpoint where the function diverges or vanishes."""


class DegeneracyError(ArithmeticError):
    """A normalizing quantity (derivative, denominator) vanishes."""


class SenseReversingError(DomainError):
    """|g'| exceeds |h'| where a sense-preserving map is required."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved error {achieved:.3g})")
        self.achieved = achieved


class UnsupportedVariantError(ValueError):
    """No closed-form result is known for this map variant."""


class RayLiftError(ArithmeticError):
    """A lifted ray met a point with non-positive Jacobian."""

    def __init__(self, message, status="singular"):
        super().__init__(message)
        self.status = status
