"""Typed errors shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedCaseError(ValueError):
    """The requested parameter combination is outside the supported family."""


class ConvergenceError(RuntimeError):
    """An iterative or quadrature scheme failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TruncationError(RuntimeError):
    """A Fock-space truncation cannot hold the requested state."""

    def __init__(self, message, needed_dim=None):
        super().__init__(message)
        self.needed_dim = needed_dim


class AccuracyError(RuntimeError):
    """A grid or truncation delivered less accuracy than required."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class UndefinedStatisticError(ArithmeticError):
    """A statistic is undefined for this state (zero denominator)."""
