"""Shared exception types."""


class CapExceeded(RuntimeError):
    """A work or memory cap would be exceeded; nothing was computed."""


class ValidationError(ValueError):
    """Input fails a structural precondition."""


class RoundingError(ArithmeticError):
    """A float-to-exact rounding residual exceeded its tolerance."""
