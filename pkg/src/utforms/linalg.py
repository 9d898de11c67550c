"""Dense complex matrix core: products, solves, ordered Schur forms, singular values.

Matrices are plain ``numpy`` ``complex128`` arrays of shape ``(n, n)``. Functions
never mutate their inputs and always return fresh arrays.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .errors import DimensionMismatch, InputError, NonConvergence, SingularMatrix
from .ordering import MODULUS, OrderingTag

EPS = np.finfo(float).eps
TIE_RTOL = 1e-9
COND_CAP = 1e6


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and copy ``a`` into a square, finite ``complex128`` array."""
    m = np.array(a, dtype=np.complex128, copy=True)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InputError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} has non-finite entries")
    return m


def fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def strict_lower(a: np.ndarray) -> np.ndarray:
    return np.tril(a, -1)


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    _same_dim(a, b)
    return a @ b


def solve(a, b) -> np.ndarray:
    """Solve ``a x = b`` by LU with partial pivoting.

    Raises:
        SingularMatrix: if a pivot is below ``n * eps`` relative to the largest one.
    """
    a = as_matrix(a, "a")
    b = np.array(b, dtype=np.complex128)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.max() == 0.0 or pivots.min() <= a.shape[0] * EPS * pivots.max():
        raise SingularMatrix("matrix is singular to working precision")
    return sla.lu_solve((lu, piv), b, check_finite=False)


def inverse(a) -> np.ndarray:
    a = as_matrix(a)
    return solve(a, np.eye(a.shape[0]))


def cond_factor(a) -> float:
    """``1 + cond_2(a)``, capped at ``1 + COND_CAP``."""
    s = singular_values(a)
    if s[-1] == 0.0:
        return 1.0 + COND_CAP
    return 1.0 + min(float(s[0] / s[-1]), COND_CAP)


def abs_det(a) -> float:
    """``|det a|`` from the pivots of an LU factorization."""
    lu, _ = sla.lu_factor(as_matrix(a), check_finite=False)
    return float(np.prod(np.abs(np.diag(lu))))


@dataclass(frozen=True)
class SchurForm:
    """``t = U @ R @ U^*`` with ``U`` unitary and ``R`` upper triangular.

    The diagonal of ``R`` is sorted according to ``order``.
    """

    U: np.ndarray
    R: np.ndarray
    order: OrderingTag

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.diag(self.R).copy()

    def reconstruct(self) -> np.ndarray:
        return self.U @ self.R @ dagger(self.U)

    def residuals(self, t) -> dict[str, float]:
        """Relative deviations from the defining invariants, for checking."""
        t = as_matrix(t)
        n = t.shape[0]
        return {
            "unitarity": fro(dagger(self.U) @ self.U - np.eye(n)) / np.sqrt(n),
            "triangularity": fro(strict_lower(self.R)) / max(fro(self.R), EPS),
            "reconstruction": fro(self.reconstruct() - t) / max(fro(t), EPS),
        }


def _swap_adjacent(U: np.ndarray, R: np.ndarray, k: int) -> None:
    """Exchange ``R[k, k]`` and ``R[k+1, k+1]`` by a unitary similarity, in place."""
    a, b, x = R[k, k], R[k + 1, k + 1], R[k, k + 1]
    d = b - a
    nrm = np.hypot(abs(x), abs(d))
    if nrm == 0.0:
        return
    phase = d / abs(d) if d != 0 else 1.0
    c = x * np.conj(phase) / nrm
    s = abs(d) / nrm
    # first column spans the eigenvector of the 2x2 block for b; det(G) = -1
    G = np.array([[c, s], [s, -np.conj(c)]])
    R[k : k + 2, :] = dagger(G) @ R[k : k + 2, :]
    R[:, k : k + 2] = R[:, k : k + 2] @ G
    U[:, k : k + 2] = U[:, k : k + 2] @ G
    R[k + 1, k] = 0.0
    R[k, k], R[k + 1, k + 1] = b, a


def reorder_schur(
    U: np.ndarray, R: np.ndarray, order: OrderingTag, tie_tol: float
) -> tuple[np.ndarray, np.ndarray]:
    """Stable insertion sort of the Schur diagonal by adjacent unitary swaps.

    Diagonal entries within ``tie_tol`` of each other are never exchanged.
    """
    U, R = U.copy(), R.copy()
    n = R.shape[0]
    for i in range(1, n):
        j = i
        while j > 0:
            a, b = R[j, j], R[j - 1, j - 1]
            if abs(a - b) <= tie_tol or order.compare(a, b, tie_tol) >= 0:
                break
            _swap_adjacent(U, R, j - 1)
            j -= 1
    return U, R


def _unordered_schur(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        R, U = sla.schur(t, output="complex", check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"Schur QR iteration did not converge: {exc}") from exc
    return U, np.triu(R)


def schur(t, order: OrderingTag = MODULUS) -> SchurForm:
    """Complex Schur form with the diagonal sorted by ``order``.

    The unordered form comes from LAPACK (Hessenberg reduction followed by
    shifted QR with deflation); ordering is done here by Givens swaps.

    Raises:
        NonConvergence: if the QR iteration hits its iteration cap.
    """
    t = as_matrix(t)
    U, R = _unordered_schur(t)
    tie_tol = TIE_RTOL * fro(t)
    U, R = reorder_schur(U, R, order, tie_tol)
    return SchurForm(U, R, order)


def sort_values(values: Sequence[complex], order: OrderingTag, tol: float = 0.0) -> np.ndarray:
    vals = [complex(v) for v in values]
    key = cmp_to_key(lambda a, b: order.compare(a, b, tol))
    return np.array(sorted(vals, key=key), dtype=np.complex128)


def eigenvalues(t, order: OrderingTag = MODULUS) -> np.ndarray:
    """Eigenvalue multiset of ``t`` (diagonal of its Schur form), listed in ``order``."""
    t = as_matrix(t)
    _, R = _unordered_schur(t)
    return sort_values(np.diag(R), order, TIE_RTOL * fro(t))


def singular_values(t) -> np.ndarray:
    """Singular values of ``t`` in descending order."""
    t = as_matrix(t)
    try:
        s = np.linalg.svd(t, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"SVD did not converge: {exc}") from exc
    return np.maximum(s, 0.0)


def spectral_norm(t) -> float:
    return float(singular_values(t)[0])


def match_multisets(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Largest distance in a greedy nearest-pair matching of two multisets.

    Pairs are taken globally closest-first. This is not an optimal (bottleneck)
    matching, but for well-separated clusters it coincides with one.
    """
    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    if a.size != b.size:
        raise DimensionMismatch(f"multisets have different sizes: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    dist = np.abs(a[:, None] - b[None, :])
    order = np.argsort(dist, axis=None, kind="stable")
    used_a = np.zeros(a.size, dtype=bool)
    used_b = np.zeros(b.size, dtype=bool)
    worst, matched = 0.0, 0
    for flat in order:
        i, j = divmod(int(flat), b.size)
        if used_a[i] or used_b[j]:
            continue
        used_a[i] = used_b[j] = True
        worst = max(worst, float(dist[i, j]))
        matched += 1
        if matched == a.size:
            break
    return worst


def normality_residual(a) -> float:
    """``||a^* a - a a^*||_F``."""
    a = as_matrix(a)
    return fro(dagger(a) @ a - a @ dagger(a))
