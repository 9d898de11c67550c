"""Invariant projections, flags, corners and the two conditional expectations.

A :class:`Flag` is stored as a unitary ``basis`` plus cut indices
``0 = c_0 < c_1 < ... < c_m = n``; its ``j``-th projection is onto the span of
the first ``c_j`` basis columns. Everything block-structured is computed by
moving to the flag basis, acting on blocks, and moving back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError, NotInvariant, SingularCorner, SingularMatrix
from .linalg import as_matrix, dagger, fro, inverse

INVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class Projection:
    """Orthogonal projection ``P = B B^*`` for an orthonormal ``range_basis`` ``B``.

    ``kernel_basis`` (orthonormal, spanning the range of ``1 - P``) is kept so
    that corners of both ``P`` and its complement use fixed, reproducible bases.
    """

    range_basis: np.ndarray
    kernel_basis: np.ndarray
    matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        b, k = self.range_basis, self.kernel_basis
        n = b.shape[0]
        if k.shape[0] != n or b.shape[1] + k.shape[1] != n:
            raise InputError("range and kernel bases must together span C^n")
        w = np.hstack([b, k])
        if fro(dagger(w) @ w - np.eye(n)) > 1e-10 * np.sqrt(n):
            raise InputError("projection bases are not orthonormal")
        object.__setattr__(self, "matrix", b @ dagger(b))

    @property
    def n(self) -> int:
        return self.range_basis.shape[0]

    @property
    def rank(self) -> int:
        return self.range_basis.shape[1]

    def complement(self) -> "Projection":
        return Projection(self.kernel_basis, self.range_basis)

    @classmethod
    def from_unitary(cls, basis, k: int) -> "Projection":
        """Projection onto the first ``k`` columns of a unitary ``basis``."""
        u = as_matrix(basis, "basis")
        return cls(u[:, :k].copy(), u[:, k:].copy())

    @classmethod
    def coordinate(cls, n: int, indices: Sequence[int]) -> "Projection":
        idx = list(indices)
        rest = [i for i in range(n) if i not in idx]
        eye = np.eye(n, dtype=np.complex128)
        return cls(eye[:, idx], eye[:, rest])

    @classmethod
    def from_matrix(cls, p, tol: float = 1e-10) -> "Projection":
        """Wrap an explicit Hermitian idempotent, checking ``P = P^* = P^2``."""
        p = as_matrix(p, "projection")
        if fro(p - dagger(p)) > 1e-12 * max(1.0, fro(p)) or fro(p @ p - p) > tol:
            raise InputError("matrix is not an orthogonal projection")
        tr = float(np.trace(p).real)
        rank = int(round(tr))
        if abs(tr - rank) > 1e-8:
            raise InputError("projection trace is not an integer")
        w, v = np.linalg.eigh((p + dagger(p)) / 2)
        order = np.argsort(-w, kind="stable")
        v = v[:, order]
        return cls(v[:, :rank].copy(), v[:, rank:].copy())


@dataclass(frozen=True)
class Flag:
    """Increasing chain of projections ``0 = p_0 <= p_1 <= ... <= p_m = 1``."""

    basis: np.ndarray
    cuts: tuple[int, ...]

    def __post_init__(self):
        u = self.basis
        n = u.shape[0]
        if u.ndim != 2 or u.shape[1] != n:
            raise InputError("flag basis must be square")
        if fro(dagger(u) @ u - np.eye(n)) > 1e-10 * np.sqrt(n):
            raise InputError("flag basis is not unitary")
        c = tuple(int(x) for x in self.cuts)
        if c[0] != 0 or c[-1] != n or any(b <= a for a, b in zip(c, c[1:])):
            raise InputError(f"cuts must increase strictly from 0 to {n}, got {c}")
        object.__setattr__(self, "cuts", c)

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def blocks(self) -> list[slice]:
        return [slice(a, b) for a, b in zip(self.cuts, self.cuts[1:])]

    def projection(self, j: int) -> Projection:
        return Projection.from_unitary(self.basis, self.cuts[j])

    def projections(self) -> list[Projection]:
        return [self.projection(j) for j in range(len(self.cuts))]

    def coarsen(self, cuts: Sequence[int]) -> "Flag":
        """Sub-flag keeping only the given cuts (which must be cuts of ``self``)."""
        missing = set(cuts) - set(self.cuts)
        if missing:
            raise InputError(f"{sorted(missing)} are not cuts of this flag")
        return Flag(self.basis, tuple(sorted(set(cuts) | {0, self.n})))

    def to_basis(self, t) -> np.ndarray:
        return dagger(self.basis) @ as_matrix(t) @ self.basis

    def from_basis(self, m) -> np.ndarray:
        return self.basis @ m @ dagger(self.basis)

    @classmethod
    def maximal(cls, basis) -> "Flag":
        u = as_matrix(basis, "basis")
        return cls(u, tuple(range(u.shape[0] + 1)))

    @classmethod
    def trivial(cls, n: int) -> "Flag":
        return cls(np.eye(n, dtype=np.complex128), (0, n))


def is_invariant(t, p: Projection, tol: float = INVARIANCE_TOL) -> tuple[bool, float]:
    """``(ok, residual)`` with ``residual = ||(1-P) T P||_F / max(1, ||T||_F)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    t = as_matrix(t)
    leak = dagger(p.kernel_basis) @ t @ p.range_basis
    residual = fro(leak) / max(1.0, fro(t))
    return residual <= tol, residual


def corner(t, p: Projection) -> np.ndarray:
    """Compression ``pTp`` written in the stored orthonormal basis of ``range(p)``."""
    t = as_matrix(t)
    return dagger(p.range_basis) @ t @ p.range_basis


def embed(block, p: Projection) -> np.ndarray:
    """Inverse of :func:`corner`: the operator on ``C^n`` acting as ``block`` on ``range(p)``."""
    return p.range_basis @ np.asarray(block) @ dagger(p.range_basis)


def block_inverse(t, p: Projection, tol: float = INVARIANCE_TOL) -> np.ndarray:
    """``T^{-1}`` assembled from the corners of a ``T``-invariant projection.

    With ``T = [[a, b], [0, c]]`` relative to ``p`` and ``1 - p`` this returns
    ``[[a^{-1}, -a^{-1} b c^{-1}], [0, c^{-1}]]`` in ambient coordinates.

    Raises:
        NotInvariant: ``p`` is not ``T``-invariant at ``tol``.
        SingularCorner: ``a`` (``"pTp"``) or ``c`` (``"(1-p)T(1-p)"``) is singular.
    """
    t = as_matrix(t)
    if p.rank in (0, p.n):
        raise InputError("block_inverse needs a projection other than 0 and 1")
    ok, residual = is_invariant(t, p, tol)
    if not ok:
        raise NotInvariant(f"projection is not invariant (residual {residual:.3e})")
    b1, b2 = p.range_basis, p.kernel_basis
    a = dagger(b1) @ t @ b1
    b = dagger(b1) @ t @ b2
    c = dagger(b2) @ t @ b2
    try:
        a_inv = inverse(a)
    except SingularMatrix:
        raise SingularCorner("pTp") from None
    try:
        c_inv = inverse(c)
    except SingularMatrix:
        raise SingularCorner("(1-p)T(1-p)") from None
    k = p.rank
    x = np.zeros_like(t)
    x[:k, :k] = a_inv
    x[:k, k:] = -a_inv @ b @ c_inv
    x[k:, k:] = c_inv
    w = np.hstack([b1, b2])
    return w @ x @ dagger(w)


def exp_onto_blocks(t, f: Flag) -> np.ndarray:
    """Expectation onto the relative commutant: keep only the diagonal blocks of the flag."""
    m = f.to_basis(t)
    out = np.zeros_like(m)
    for s in f.blocks:
        out[s, s] = m[s, s]
    return f.from_basis(out)


def exp_onto_flag_algebra(t, f: Flag) -> np.ndarray:
    """Trace-preserving expectation onto the span of the flag's block projections.

    Each diagonal block is replaced by its normalized trace times the block
    identity; for a maximal flag this is the diagonal of ``T`` in the flag basis.
    """
    m = f.to_basis(t)
    out = np.zeros_like(m)
    for s in f.blocks:
        size = s.stop - s.start
        out[s, s] = (np.trace(m[s, s]) / size) * np.eye(size)
    return f.from_basis(out)
