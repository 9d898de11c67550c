"""Exception hierarchy.

Everything raised on purpose by the package derives from :class:`UtformsError`
so the CLI can map failures onto exit codes in one place.
"""

from __future__ import annotations


class UtformsError(Exception):
    """Base class for all package errors."""


class InputError(UtformsError, ValueError):
    """Malformed user input (files, arguments, matrices)."""


class DimensionMismatch(InputError):
    pass


class SingularMatrix(UtformsError):
    pass


class NonConvergence(UtformsError):
    pass


class SingularityHit(UtformsError):
    """A function was evaluated at (or too close to) one of its singularities."""


class ClusterTooLarge(UtformsError):
    pass


class NotNormal(UtformsError):
    pass


class NotInvariant(UtformsError):
    pass


class SingularCorner(UtformsError):
    """One of the corners ``pTp`` / ``(1-p)T(1-p)`` is not invertible."""

    def __init__(self, which: str, message: str | None = None):
        self.which = which
        super().__init__(message or f"corner {which} is singular to working precision")


class ParseError(InputError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class DivisionByZeroConstant(ParseError):
    pass


class NoValidContour(UtformsError):
    pass


class SingularResolvent(UtformsError):
    pass


class ZeroInSupport(UtformsError):
    pass


class NotCommuting(UtformsError):
    pass


class NotNilpotent(UtformsError):
    pass
