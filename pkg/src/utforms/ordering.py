"""Orderings of the complex plane used to sort Schur diagonals.

An ordering is a three-way comparison on complex numbers. Comparisons take a
tolerance so that values closer than ``tol`` count as tied; this is what keeps
the ordered Schur form stable under eigen-solver noise. The comparison is not
a metric order for adversarial clusters (tolerance ties are not transitive),
which is acceptable for the deterministic insertion sort that consumes it.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

Compare = Callable[[complex, complex, float], int]


def _cmp(x: float, y: float, tol: float) -> int:
    if x < y - tol:
        return -1
    if x > y + tol:
        return 1
    return 0


def _modulus_then_argument(a: complex, b: complex, tol: float) -> int:
    c = _cmp(abs(a), abs(b), tol)
    if c:
        return c
    return _cmp(cmath.phase(a), cmath.phase(b), tol)


def _real_then_imag(a: complex, b: complex, tol: float) -> int:
    c = _cmp(a.real, b.real, tol)
    if c:
        return c
    return _cmp(a.imag, b.imag, tol)


@dataclass(frozen=True)
class OrderingTag:
    """A named total preorder on complex numbers.

    ``compare(a, b, tol)`` returns -1 if ``a`` goes first, 1 if ``b`` goes first
    and 0 for ties. Ties are never reordered.
    """

    name: str
    compare: Compare

    @classmethod
    def custom(cls, compare: Compare, name: str = "custom") -> "OrderingTag":
        return cls(name, compare)

    @classmethod
    def from_name(cls, name: str) -> "OrderingTag":
        try:
            return _BY_NAME[name]
        except KeyError:
            raise ValueError(
                f"unknown ordering {name!r}; expected one of {sorted(_BY_NAME)}"
            ) from None

    def __str__(self) -> str:
        return self.name


MODULUS = OrderingTag("modulus", _modulus_then_argument)
REAL_IMAG = OrderingTag("real-imag", _real_then_imag)

_BY_NAME = {MODULUS.name: MODULUS, REAL_IMAG.name: REAL_IMAG}
