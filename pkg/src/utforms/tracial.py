"""Trace state, Brown measure, Fuglede-Kadison determinant and nilpotency diagnostics.

At matrix scale the trace state is ``tau(x) = trace(x) / n``, the Brown measure
of ``T`` is the uniform atomic measure on its eigenvalues (with multiplicity)
and the Fuglede-Kadison determinant is ``|det T|^(1/n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from .errors import SingularityHit
from .linalg import (
    as_matrix,
    dagger,
    eigenvalues,
    fro,
    match_multisets,
    singular_values,
)

if TYPE_CHECKING:
    from .holo.expr import HoloFunction

MERGE_RTOL = 1e-9
FK_ZERO_RTOL = 1e-14


def trace_state(t) -> complex:
    t = as_matrix(t)
    return complex(np.trace(t) / t.shape[0])


@dataclass(frozen=True)
class Atom:
    location: complex
    weight: Fraction


@dataclass(frozen=True)
class BrownMeasure:
    """Finitely many weighted atoms; weights are exact fractions with denominator ``n``."""

    atoms: tuple[Atom, ...]
    n: int

    def __post_init__(self):
        if sum((a.weight for a in self.atoms), Fraction(0)) != 1:
            raise ValueError("Brown measure weights must sum to 1")

    @classmethod
    def from_points(cls, points, merge_tol: float) -> "BrownMeasure":
        """Uniform measure on ``points``; points within ``merge_tol`` share an atom."""
        pts = [complex(p) for p in np.ravel(points)]
        n = len(pts)
        # each group is [sum, count]; a point joins the first group whose running mean is close
        groups: list[list] = []
        for p in pts:
            for g in groups:
                if abs(g[0] / g[1] - p) <= merge_tol:
                    g[0] += p
                    g[1] += 1
                    break
            else:
                groups.append([p, 1])
        atoms = tuple(Atom(g[0] / g[1], Fraction(g[1], n)) for g in groups)
        return cls(atoms, n)

    def support(self) -> np.ndarray:
        return np.array([a.location for a in self.atoms], dtype=np.complex128)

    def points(self) -> np.ndarray:
        """The atoms expanded into a multiset of ``n`` points."""
        out = []
        for a in self.atoms:
            out.extend([a.location] * int(a.weight * self.n))
        return np.array(out, dtype=np.complex128)

    def weight_at(self, z: complex, tol: float = 0.0) -> Fraction:
        return sum((a.weight for a in self.atoms if abs(a.location - z) <= tol), Fraction(0))

    def distance(self, other: "BrownMeasure") -> float:
        """Matching distance between the two measures viewed as point multisets."""
        return match_multisets(self.points(), other.points())

    def to_json(self) -> dict:
        return {
            "atoms": [
                {
                    "re": a.location.real,
                    "im": a.location.imag,
                    "num": int(a.weight * self.n),
                    "den": self.n,
                }
                for a in self.atoms
            ]
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BrownMeasure":
        atoms = doc["atoms"]
        dens = {int(a["den"]) for a in atoms}
        if len(dens) != 1:
            raise ValueError("all atoms must share the denominator n")
        (n,) = dens
        return cls(
            tuple(
                Atom(complex(a["re"], a["im"]), Fraction(int(a["num"]), n)) for a in atoms
            ),
            n,
        )


def brown_measure(t, merge_tol: float | None = None) -> BrownMeasure:
    t = as_matrix(t)
    if merge_tol is None:
        merge_tol = MERGE_RTOL * max(1.0, fro(t))
    return BrownMeasure.from_points(eigenvalues(t), merge_tol)


def pushforward(mu: BrownMeasure, h: "HoloFunction") -> BrownMeasure:
    """Image of ``mu`` under ``h``: atoms move to ``h(location)``, weights carry over."""
    locs = mu.support()
    for z in locs:
        if h.is_singular_at(z):
            raise SingularityHit(f"atom {z} is a singularity of {h.source!r}")
    images = np.asarray(h(locs), dtype=np.complex128)
    expanded = []
    for a, w in zip(images, (a.weight for a in mu.atoms)):
        expanded.extend([a] * int(w * mu.n))
    scale = max(1.0, float(np.max(np.abs(images))) if images.size else 1.0)
    return BrownMeasure.from_points(expanded, MERGE_RTOL * scale)


def fk_determinant(t) -> float:
    """``(prod of singular values)^(1/n)``; exactly 0 when ``t`` is numerically singular."""
    t = as_matrix(t)
    s = singular_values(t)
    if s[-1] <= FK_ZERO_RTOL * fro(t):
        return 0.0
    return float(np.exp(np.mean(np.log(s))))


@dataclass(frozen=True)
class QuasinilpotencyProfile:
    """``norms[m - 1] = ||Q^m||^(1/m)`` for ``m = 1 .. m_max``."""

    norms: tuple[float, ...]


def quasinilpotency_profile(q, m_max: int) -> QuasinilpotencyProfile:
    q = as_matrix(q)
    out = []
    power = np.eye(q.shape[0], dtype=np.complex128)
    for m in range(1, m_max + 1):
        power = power @ q
        out.append(float(singular_values(power)[0]) ** (1.0 / m))
    return QuasinilpotencyProfile(tuple(out))


def staircase_distance(q, threshold: float) -> float:
    """Upper bound on the distance from ``q`` to the set of nilpotent matrices.

    Deflates one numerical null vector at a time: if ``v`` is the right singular
    vector of the smallest singular value ``s`` of the current compression, then
    zeroing ``Qv`` costs ``s`` and leaves a block triangular matrix whose
    compression to ``v``'s complement must again be nilpotent. The returned value
    is the root-sum-square of the ``s`` removed, or ``inf`` when some ``s``
    exceeds ``threshold``, i.e. ``q`` is not nilpotent at this threshold.
    """
    a = as_matrix(q)
    err2 = 0.0
    while a.shape[0] > 0:
        _, s, vh = np.linalg.svd(a)
        if s[-1] > threshold:
            return float("inf")
        err2 += float(s[-1]) ** 2
        keep = dagger(vh)[:, :-1]
        a = dagger(keep) @ a @ keep
    return float(np.sqrt(err2))


@dataclass(frozen=True)
class NilpotencyWitness:
    """Outcome of :func:`is_nilpotent`.

    ``backward_error`` is an upper bound on the distance to the nilpotent
    matrices and decides the verdict. ``spectral_radius`` is the largest modulus
    among the computed eigenvalues and ``power_root`` is ``||Q^n||^(1/n)``; both
    are reported for information only, since a rounding error ``d`` in a
    nilpotent matrix of size ``n`` legitimately moves them by about ``d^(1/n)``.
    """

    nilpotent: bool
    backward_error: float
    spectral_radius: float
    power_root: float
    threshold: float

    def __bool__(self) -> bool:
        return self.nilpotent


def is_nilpotent(q, tol: float = 1e-8, basis=None) -> NilpotencyWitness:
    """Decide numerical nilpotency at ``threshold = tol * max(1, ||q||_F)``.

    Two certificates bound the distance to the nilpotent matrices: the
    staircase deflation, and, when an orthonormal ``basis`` is supplied in
    which ``q`` should be strictly upper triangular, the Frobenius norm of the
    diagonal and strictly lower part in that basis. The basis certificate is
    tried first and the staircase only when it does not already suffice.
    Without a basis the staircase alone certifies rounded random nilpotents
    reliably up to about ``n = 16``; beyond that their Jordan structure is too
    ill conditioned and a basis should be given.

    Raises:
        ValueError: if ``tol`` is not positive.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    q = as_matrix(q)
    n = q.shape[0]
    threshold = tol * max(1.0, fro(q))
    backward = float("inf")
    if basis is not None:
        b = np.asarray(basis, dtype=np.complex128)
        backward = fro(np.tril(dagger(b) @ q @ b))
    if backward > threshold:
        backward = min(backward, staircase_distance(q, threshold))
    radius = float(np.max(np.abs(eigenvalues(q))))
    power_root = float(singular_values(np.linalg.matrix_power(q, n))[0]) ** (1.0 / n)
    return NilpotencyWitness(backward <= threshold, backward, radius, power_root, threshold)


def nilpotency_in_basis(q, basis) -> tuple[float, float]:
    """Express ``q`` in the orthonormal ``basis`` and measure its triangular structure.

    Returns:
        ``(diagonal_radius, lower_residual)``: the largest modulus on the diagonal
        (the eigenvalues, if the lower part were zero) and the Frobenius norm of
        the strictly lower part.
    """
    q = as_matrix(q)
    b = np.asarray(basis, dtype=np.complex128)
    m = dagger(b) @ q @ b
    return float(np.max(np.abs(np.diag(m)))), fro(np.tril(m, -1))


def fk_determinant_via_modulus(t) -> float:
    """``exp(tau(log |T|))`` with ``|T| = (T^* T)^(1/2)`` from a Hermitian eigensolve."""
    t = as_matrix(t)
    w = np.linalg.eigvalsh(dagger(t) @ t)
    if w.min() <= 0.0:
        return 0.0
    return float(np.exp(np.mean(0.5 * np.log(w))))
