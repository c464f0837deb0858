"""Exception hierarchy shared by every module."""

from __future__ import annotations


class EulerCalcError(Exception):
    """Base class for all errors raised by eulercalc."""


class ValidationError(EulerCalcError, ValueError):
    """Malformed or inconsistent input (dimension mismatch, bad document, ...)."""


class ResourceError(EulerCalcError):
    """An operation exceeded its cell budget."""

    def __init__(self, message: str, count: int) -> None:
        super().__init__(f"{message} (cell count reached: {count})")
        self.count = count


class ConsistencyError(EulerCalcError):
    """An internal soundness check failed.

    Raised when oversampling finds two different values inside one cell, or
    when two independent routes to the same quantity disagree.  Never caught
    and patched internally.
    """
