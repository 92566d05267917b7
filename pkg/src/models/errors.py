"""
SpinXfer Exceptions
One exception family for every failure the library reports.
"""

from typing import Optional


class SpinTransferError(Exception):
    """Base error carrying the field, message, suggested action and code."""

    error_code = "SPINXFER_ERROR"

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        suggested_action: Optional[str] = None,
        error_code: Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        self.field = field
        self.suggested_action = suggested_action
        if error_code is not None:
            self.error_code = error_code

    def __str__(self) -> str:
        text = self.message
        if self.field:
            text = f"{self.field}: {text}"
        if self.suggested_action:
            text = f"{text} ({self.suggested_action})"
        return text


class InvalidArgumentError(SpinTransferError, ValueError):
    """Raised when an input violates a documented precondition."""

    error_code = "INVALID_ARGUMENT"


class ResourceLimitError(SpinTransferError):
    """Raised when a computation would exceed a configured size cap."""

    error_code = "RESOURCE_LIMIT"


class VerificationError(SpinTransferError):
    """Raised when independent evaluators disagree beyond tolerance."""

    error_code = "VERIFICATION_FAILED"
