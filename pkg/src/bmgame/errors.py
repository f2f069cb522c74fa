"""Exception types shared across the package."""

from __future__ import annotations


class BmgameError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(BmgameError):
    """Operands have incompatible dimensions."""


class DegenerateInputError(BmgameError):
    """Input does not describe a full-dimensional symmetric body."""


class RejectedInputError(BmgameError):
    """Input violates a documented precondition.

    Carries an optional exact witness (a vector, a matrix entry, a point
    triple) demonstrating the violation.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DimensionGuardError(BmgameError):
    """A construction would exceed the configured dimension budget."""


class GameAbort(BmgameError):
    """A strategy emitted an invalid move; carries the diagnostic transcript."""

    def __init__(self, message: str, transcript=None):
        super().__init__(message)
        self.transcript = transcript
