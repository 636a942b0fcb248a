"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PadicHardyError(Exception):
    """Base class for all errors raised by :mod:`padic_hardy`."""


class PrecisionExhausted(PadicHardyError, ArithmeticError):
    """Cancellation consumed every stored digit, the valuation is unknowable."""


class ZeroVectorError(PadicHardyError, ValueError):
    """The zero vector lies on no shell."""


class OverlapError(PadicHardyError, ValueError):
    """Table keys or segment ranges of a radial function intersect."""


class DivergenceError(PadicHardyError, ArithmeticError):
    """A series, norm or characteristic integral is infinite.

    ``where`` names the offending piece (a slot, a tail, a shell) so callers
    can report it without parsing the message.
    """

    def __init__(self, message: str, where: str | None = None):
        super().__init__(message)
        self.where = where


class TruncationError(PadicHardyError, RuntimeError):
    """A convergent sum did not reach its tolerance inside the term cap."""


class InconclusiveSupError(PadicHardyError, RuntimeError):
    """The Morrey-Herz supremum could not be certified on the scanned range."""


class PreconditionError(PadicHardyError, ValueError):
    """Inputs violate the hypotheses an operation was asked to check."""
