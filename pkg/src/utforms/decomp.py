"""The normal-plus-nilpotent decomposition ``T = N + Q`` at matrix scale.

An ordered Schur basis gives a maximal flag of ``T``-invariant subspaces whose
``k``-th member carries the first ``k`` eigenvalues in the chosen order. ``N`` is
the expectation of ``T`` onto the algebra generated by that flag (the Schur
diagonal, conjugated back) and ``Q = T - N`` is strictly upper triangular in the
flag basis, hence nilpotent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroInSupport
from .flags import Flag, exp_onto_flag_algebra
from .linalg import SchurForm, as_matrix, dagger, fro, schur
from .ordering import MODULUS, OrderingTag

INVERTIBLE_RTOL = 1e-8


@dataclass(frozen=True)
class Decomposition:
    n_part: np.ndarray
    q_part: np.ndarray
    flag: Flag
    order: OrderingTag
    schur_form: SchurForm

    @property
    def t(self) -> np.ndarray:
        return self.n_part + self.q_part

    @property
    def diagonal(self) -> np.ndarray:
        """Eigenvalues of ``N`` in flag order."""
        return self.schur_form.eigenvalues


def hs_flag(t, order: OrderingTag = MODULUS) -> Flag:
    """Maximal flag of ``T``-invariant subspaces from the ordered Schur basis."""
    return Flag.maximal(schur(t, order).U)


def decompose(t, order: OrderingTag = MODULUS) -> Decomposition:
    t = as_matrix(t)
    sf = schur(t, order)
    flag = Flag.maximal(sf.U)
    n_part = exp_onto_flag_algebra(t, flag)
    return Decomposition(n_part, t - n_part, flag, order, sf)


def multiplicative_form(d: Decomposition) -> np.ndarray:
    """``N^{-1} Q``, so that ``T = N (I + N^{-1} Q)``.

    ``N^{-1}`` is formed in the flag basis, where ``N`` is diagonal.

    Raises:
        ZeroInSupport: if some eigenvalue of ``N`` is below ``1e-8 ||T||_F`` in modulus.
    """
    lam = d.flag.to_basis(d.n_part).diagonal()
    smallest = float(np.min(np.abs(lam)))
    if smallest == 0.0 or smallest < INVERTIBLE_RTOL * fro(d.t):
        raise ZeroInSupport("0 lies in the support of the Brown measure; N is not invertible")
    u = d.flag.basis
    n_inv = (u / lam) @ dagger(u)
    return n_inv @ d.q_part
