"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the admissible domain of an operation."""


class OrderingError(ValueError):
    """Points were supplied in an order the case analysis does not cover (x > y)."""


class ParameterMismatch(ValueError):
    """A bound variant received parameters inconsistent with its pinned values."""


class ConvergenceError(RuntimeError):
    """Adaptive quadrature failed to reach tolerance.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
