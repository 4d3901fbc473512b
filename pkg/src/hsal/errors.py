"""Exception types shared across the package."""


class HsalError(Exception):
    """Base class for all package errors."""


class ConfigurationError(HsalError):
    """Invalid parameter combination (e.g. k >= N, unknown graph kind)."""


class ValidationError(HsalError):
    """Data violates a documented precondition or invariant."""


class ParseError(HsalError):
    """Malformed input file; carries a 1-based row number when known."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class NumericalError(HsalError):
    """A linear-algebra step failed (singular system, degenerate pivot)."""


class ConflictError(HsalError):
    """Attempt to re-label an already labeled point."""


class OutOfOrderError(HsalError):
    """Label submitted for a point that is not the currently issued query."""


class UsageError(HsalError):
    """Operation called in a state it does not support (e.g. empty pool)."""


class PoolExhaustedError(HsalError):
    """No unlabeled candidates remain to select from."""


class SessionComplete(HsalError):
    """The session's oracle-query budget has been spent."""
