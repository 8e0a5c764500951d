"""Exception types raised across the package."""


class IGMError(Exception):
    """Base class for all package errors."""


class ValidationError(IGMError, ValueError):
    """Input does not describe a valid object (matrix, vector, config)."""


class NonSquare(ValidationError):
    pass


class NonPositiveEntry(ValidationError):
    pass


class ReciprocityViolation(ValidationError):
    def __init__(self, message, row=None, col=None):
        super().__init__(message)
        self.row = row
        self.col = col


class BadDiagonal(ValidationError):
    pass


class ZeroWeight(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class UnsupportedOrder(ValidationError):
    pass


class ZeroShift(ValidationError):
    """A shifted Gram matrix was requested with ``r == 0``."""


class ParseError(ValidationError):
    def __init__(self, message, row=None, col=None):
        loc = ""
        if row is not None:
            loc = f" at row {row}" + (f", column {col}" if col is not None else "")
        super().__init__(message + loc)
        self.row = row
        self.col = col


class SingularMatrix(IGMError, ArithmeticError):
    """LU factorization hit a pivot below the singularity threshold."""

    def __init__(self, message="matrix is singular to working precision", step=None):
        super().__init__(message)
        self.step = step


class ZeroShiftOnConsistent(SingularMatrix):
    """NIGM with r = 0 on a perfectly consistent matrix (reduced Gram is singular)."""


class NoConvergence(IGMError, RuntimeError):
    pass
