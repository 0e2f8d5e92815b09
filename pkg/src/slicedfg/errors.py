"""Exception types shared across the package."""
from __future__ import annotations


class ValidationError(ValueError):
    """Raised when input data violates a documented invariant."""


class SizeLimitError(RuntimeError):
    """Raised when an exhaustive oracle refuses an instance that is too large."""
