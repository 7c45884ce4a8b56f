"""Exception types shared across the package."""


class KaczsolveError(Exception):
    """Base class for all package-specific errors."""


class ZeroRowError(KaczsolveError):
    """A matrix row has (numerically) zero norm."""

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row} has zero norm (below 1e-300)")


class ShapeMismatchError(KaczsolveError):
    """Operand shapes do not conform."""


class ParseError(KaczsolveError):
    """A Matrix Market file could not be parsed."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UnsupportedFormatError(KaczsolveError):
    """The Matrix Market header names a format this reader does not handle."""


class InvalidLambdaError(KaczsolveError):
    """The acceleration parameter is outside the admissible range [0, m]."""


class InvalidCycleError(KaczsolveError):
    """The caching cycle length is not a positive integer."""


class InvalidBudgetError(KaczsolveError):
    """The iteration budget is too small for the requested operation."""


class DegenerateResidualsError(KaczsolveError):
    """Warm-up residuals are too small to form a decay-rate estimate."""


class BreakdownError(KaczsolveError):
    """Conjugate-gradient direction curvature underflowed."""


class TooLargeError(KaczsolveError):
    """The matrix exceeds the dense-oracle size guard."""


class NumericalFailureError(KaczsolveError):
    """An iterative dense decomposition failed to converge."""


class EmptyMatrixError(KaczsolveError):
    """A generator produced a matrix with no rows."""


class InconsistentSystemError(KaczsolveError):
    """The system appears to admit no exact solution."""
