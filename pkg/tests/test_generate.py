from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from utforms.generate import KINDS, generate
from utforms.linalg import COND_CAP, cond_factor, eigenvalues, fro, normality_residual
from utforms.tracial import is_nilpotent

seeds = st.integers(0, 2**32 - 1)


def min_gap(values) -> float:
    d = np.abs(values[:, None] - values[None, :])
    d[np.diag_indices(values.size)] = np.inf
    return float(d.min())


@pytest.mark.parametrize("kind", KINDS)
def test_generation_is_deterministic(kind):
    a, b = generate(kind, 6, 11), generate(kind, 6, 11)
    assert all(np.array_equal(x, y) for x, y in zip(np.atleast_3d(a), np.atleast_3d(b)))
    c = generate(kind, 6, 12)
    assert not all(np.array_equal(x, y) for x, y in zip(np.atleast_3d(a), np.atleast_3d(c)))


def test_bad_arguments():
    with pytest.raises(ValueError):
        generate("triangular", 1, 0)
    with pytest.raises(ValueError):
        generate("hexagonal", 4, 0)


def test_near_defective_gap_in_range():
    lam = eigenvalues(generate("near-defective", 4, 1))
    assert 1e-4 * 0.99 <= min_gap(lam) <= 1e-2 * 1.01


@settings(max_examples=20)
@given(seeds, st.integers(2, 32))
def test_near_defective_gap_property(seed, n):
    t = generate("near-defective", n, seed)
    assert 1e-4 * 0.99 <= min_gap(eigenvalues(t)) <= 1e-2 * 1.01
    assert cond_factor(t) <= COND_CAP


@given(seeds, st.integers(2, 32))
def test_spectral_is_normal(seed, n):
    t = generate("spectral", n, seed)
    assert normality_residual(t) <= 1e-12 * max(1, fro(t)) ** 2


@given(seeds, st.integers(2, 32))
def test_commuting_pair(seed, n):
    n_mat, q = generate("commuting-pair", n, seed)
    scale = max(1, fro(n_mat) * fro(q))
    assert fro(n_mat @ q - q @ n_mat) <= 1e-12 * scale
    assert normality_residual(n_mat) <= 1e-12 * max(1, fro(n_mat)) ** 2
    assert np.linalg.norm(np.linalg.matrix_power(q, n)) <= 1e-10 * max(1, fro(q)) ** n
