"""Exception types raised across the package."""

from __future__ import annotations


class SigJEffError(Exception):
    """Base class for all package errors."""


class IllPosedInputError(SigJEffError, ValueError):
    """Input data cannot support the requested computation."""


class NumericalError(SigJEffError, ArithmeticError):
    """A statistic came out non-finite even after regularization."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None,
                 permutation: int | None = None):
        super().__init__(message)
        self.pair = pair
        self.permutation = permutation
