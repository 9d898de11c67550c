from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_matrix, random_unitary
from utforms.decomp import decompose, hs_flag, multiplicative_form
from utforms.errors import ZeroInSupport
from utforms.flags import corner, exp_onto_blocks, is_invariant
from utforms.linalg import eigenvalues, fro, match_multisets, normality_residual
from utforms.ordering import MODULUS, REAL_IMAG
from utforms.tracial import brown_measure, fk_determinant, is_nilpotent

seeds = st.integers(0, 2**32 - 1)
T2 = np.array([[1, 1], [0, 2]], dtype=complex)


def test_hs_flag_of_diagonal():
    f = hs_flag(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(np.abs(f.basis), np.eye(3)[:, [1, 2, 0]], atol=1e-14)
    t = np.diag([3.0, 1.0, 2.0])
    for k, expected in ((1, [1]), (2, [1, 2]), (3, [1, 2, 3])):
        got = np.sort(eigenvalues(corner(t, f.projection(k))).real)
        np.testing.assert_allclose(got, expected, atol=1e-14)


def test_hs_flag_of_sorted_triangular_is_identity():
    f = hs_flag(np.triu(np.ones((3, 3))) + np.diag([0, 1, 2]))
    np.testing.assert_allclose(np.abs(f.basis), np.eye(3), atol=1e-14)


def test_decompose_examples():
    d = decompose(T2)
    np.testing.assert_allclose(d.n_part, np.diag([1, 2]), atol=1e-15)
    np.testing.assert_allclose(d.q_part, [[0, 1], [0, 0]], atol=1e-15)
    nil = np.array([[0, 2], [0, 0]], dtype=complex)
    d = decompose(nil)
    np.testing.assert_array_equal(d.n_part, np.zeros((2, 2)))
    np.testing.assert_array_equal(d.q_part, nil)


@given(seeds, st.integers(1, 24))
def test_normal_matrix_decomposes_trivially(seed, n):
    u = random_unitary(seed, n)
    t = (u * random_matrix(seed + 1, n).diagonal()) @ u.conj().T
    d = decompose(t)
    assert fro(d.q_part) <= 1e-9 * max(1, fro(t))
    assert fro(d.n_part - t) <= 1e-9 * max(1, fro(t))


@given(seeds, st.integers(1, 32), st.sampled_from([MODULUS, REAL_IMAG]))
def test_decomposition_invariants(seed, n, order):
    t = random_matrix(seed, n)
    d = decompose(t, order)
    scale = max(1, fro(t))
    # Q = T - N, so N + Q recovers T up to one rounding per entry
    assert np.all(np.abs(d.n_part + d.q_part - t) <= 2 * np.finfo(float).eps * np.abs(d.n_part).max())
    assert normality_residual(d.n_part) <= 1e-9 * max(1, fro(d.n_part)) ** 2
    assert brown_measure(d.n_part).distance(brown_measure(t)) <= 1e-6 * scale
    assert fro(np.tril(d.flag.to_basis(d.q_part))) <= 1e-12 * scale
    assert is_nilpotent(d.q_part, basis=d.flag.basis)
    for p in d.flag.projections():
        for m in (t, d.n_part, d.q_part):
            assert is_invariant(m, p)[0]


@given(seeds, st.integers(1, 16))
def test_fk_determinant_of_expectation_agrees(seed, n):
    t = random_matrix(seed, n)
    d = decompose(t)
    e = exp_onto_blocks(t, d.flag)
    rng = np.random.default_rng(seed)
    for lam in 2 * (rng.standard_normal(20) + 1j * rng.standard_normal(20)):
        shift = lam * np.eye(n)
        a, b = fk_determinant(t - shift), fk_determinant(e - shift)
        assert abs(a - b) <= 1e-7 * max(a, b, 1e-300)


@given(seeds, st.integers(1, 16))
def test_ordering_only_relabels_n(seed, n):
    t = random_matrix(seed, n)
    a, b = decompose(t, MODULUS), decompose(t, REAL_IMAG)
    assert match_multisets(a.diagonal, b.diagonal) <= 1e-6 * max(1, fro(t))
    assert brown_measure(a.n_part).distance(brown_measure(b.n_part)) <= 1e-6 * max(1, fro(t))


def test_multiplicative_form_examples():
    np.testing.assert_allclose(multiplicative_form(decompose(T2)), [[0, 1], [0, 0]], atol=1e-15)
    u = random_unitary(0, 4)
    t = (u * np.array([1, 2j, -3, 4])) @ u.conj().T
    assert fro(multiplicative_form(decompose(t))) <= 1e-12
    with pytest.raises(ZeroInSupport):
        multiplicative_form(decompose(np.diag([0.0, 1.0])))
    with pytest.raises(ZeroInSupport):
        multiplicative_form(decompose([[0, 1], [0, 0]]))
