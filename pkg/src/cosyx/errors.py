"""Exception types shared across the package."""

from __future__ import annotations


class CosyxError(Exception):
    """Base class for all package errors."""


class InputError(CosyxError, ValueError):
    """Malformed or out-of-range input."""


class ValidationError(CosyxError):
    """A complex or cone system violates a structural law.

    ``witness`` identifies the offending object, e.g. ``(k, index)`` of a cell.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(CosyxError):
    """An exact search would exceed its enumeration budget.

    Raised instead of returning an approximate answer.
    """

    def __init__(self, message: str, required=None, allowed=None):
        super().__init__(message)
        self.required = required
        self.allowed = allowed
