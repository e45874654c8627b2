"""Exception types raised across the package."""


class MatchcountError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(MatchcountError):
    """Operation needs a shape the matrix does not have (e.g. square input)."""


class CapacityError(MatchcountError):
    """Input exceeds a documented size cap for an exact computation."""


class DomainError(MatchcountError):
    """Numeric argument outside the documented domain."""


class ParseError(MatchcountError):
    """Malformed matrix text or ensemble spec string.

    Carries a 1-based line number when the source is a matrix file.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UndefinedRatioError(MatchcountError):
    """Critical ratio requested where the mean is zero."""


class EquivalenceViolationError(MatchcountError):
    """Exhaustive distribution comparison found a mismatch."""
