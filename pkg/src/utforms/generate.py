"""Seeded random test instances.

Kinds:

* ``triangular``: random diagonal plus a random strictly upper part (scaled by
  ``1/sqrt(n)`` to keep eigenvalues well conditioned), conjugated by a Haar
  unitary.
* ``spectral``: a normal matrix with planted spectrum.
* ``commuting-pair``: a normal ``N`` with repeated eigenvalues and a nilpotent
  ``Q`` supported inside its eigenspaces, so ``NQ = QN``.
* ``near-defective``: like ``triangular`` but with one planted pair of
  eigenvalues at distance between ``1e-4`` and ``1e-2`` (all other gaps are at
  least ``2e-2``), which stresses ordered Schur swapping.

Diagonals are drawn uniformly from the disk of radius ``2 * max(1, sqrt(n/32))``.
Instances whose condition number exceeds ``1e6`` are redrawn from the same stream.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .linalg import COND_CAP, cond_factor, dagger

KINDS = ("triangular", "spectral", "commuting-pair", "near-defective")


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, *stream])


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.exp(2j * np.pi * rng.random((1, 1)))
    return unitary_group.rvs(n, random_state=rng)


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _radius(n: int) -> float:
    return 2.0 * max(1.0, np.sqrt(n / 32))


def disk_points(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    return radius * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def _min_gap(values: np.ndarray) -> float:
    d = np.abs(values[:, None] - values[None, :])
    d[np.diag_indices(values.size)] = np.inf
    return float(d.min()) if values.size > 1 else np.inf


def random_strict_upper(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return np.triu(complex_normal(rng, (n, n)), 1) * scale / np.sqrt(n)


def _conjugated(rng, diag: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = diag.size
    r = np.diag(diag) + random_strict_upper(rng, n)
    u = random_unitary(n, rng)
    return u @ r @ dagger(u), r


def triangular(n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        t, _ = _conjugated(rng, disk_points(rng, n, _radius(n)))
        if cond_factor(t) <= COND_CAP:
            return t


def spectral(n: int, rng: np.random.Generator) -> np.ndarray:
    lam = disk_points(rng, n, _radius(n))
    u = random_unitary(n, rng)
    return (u * lam) @ dagger(u)


def commuting_pair(n: int, rng: np.random.Generator, with_basis: bool = False):
    """``(N, Q)`` with ``N`` normal, ``Q`` nilpotent and ``NQ = QN`` exactly in the planted basis.

    With ``with_basis`` the planted unitary ``U`` is returned as a third item;
    ``U^* N U`` is diagonal and ``U^* Q U`` strictly upper triangular.
    """
    sizes = []
    while sum(sizes) < n:
        sizes.append(int(min(rng.integers(1, 5), n - sum(sizes))))
    while True:
        lam = disk_points(rng, len(sizes), _radius(n))
        if _min_gap(lam) >= 0.1:
            break
    diag = np.repeat(lam, sizes)
    q = np.zeros((n, n), dtype=np.complex128)
    start = 0
    for size in sizes:
        block = slice(start, start + size)
        q[block, block] = np.triu(complex_normal(rng, (size, size)), 1)
        start += size
    u = random_unitary(n, rng)
    pair = ((u * diag) @ dagger(u), u @ q @ dagger(u))
    return (*pair, u) if with_basis else pair


def near_defective(n: int, rng: np.random.Generator) -> np.ndarray:
    radius = _radius(n)
    while True:
        lam = disk_points(rng, n, radius)
        if _min_gap(lam) < 3e-2:
            continue
        gap = 10 ** rng.uniform(-4, -2)
        i = int(rng.integers(0, n - 1))
        lam[i + 1] = lam[i] + gap * np.exp(2j * np.pi * rng.random())
        t, _ = _conjugated(rng, lam)
        if cond_factor(t) <= COND_CAP:
            return t


def generate(kind: str, n: int, seed: int):
    """Deterministic instance for ``(kind, n, seed)``; ``commuting-pair`` returns two matrices."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    if kind == "triangular":
        return triangular(n, rng)
    if kind == "spectral":
        return spectral(n, rng)
    if kind == "commuting-pair":
        return commuting_pair(n, rng)
    if kind == "near-defective":
        return near_defective(n, rng)
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
