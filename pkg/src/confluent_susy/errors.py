"""Exception types raised across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where the quantity is defined."""


class PoleError(ArithmeticError):
    """Evaluation requested at (or within tolerance of) a pole."""


class NodeError(ZeroDivisionError):
    """A seed function vanishes on a path where its reciprocal is needed."""


class SingularTransformError(ArithmeticError):
    """The Wronskian-type denominator w(x) vanishes, so the partner potential blows up.

    ``crossing`` holds the located zero of w (``None`` if unknown, +/-inf for a zero
    reached only asymptotically).
    """

    def __init__(self, message, crossing=None):
        super().__init__(message)
        self.crossing = crossing


class ConsistencyError(ArithmeticError):
    """A quantity that must be real (or must satisfy an identity) failed the check."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NumericalError(RuntimeError):
    """A numerical routine (eigensolver, root finder) failed to converge."""
