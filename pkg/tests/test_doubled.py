"""Tests for the doubled-up matrix algebra kernel."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from cke.doubled import (
    SignatureMatrix,
    adjoint,
    as_complex_matrix,
    delta_blocks,
    delta_embed,
    hstack_delta,
    inertia,
    is_delta_structured,
    matrix_from_json,
    matrix_to_json,
    signature_matrix,
    subsystem_permutation,
    vstack_delta,
)

finite_complex = st.complex_numbers(
    allow_nan=False, allow_infinity=False, max_magnitude=1e3
)


def complex_block(rows: int, cols: int):
    return st.lists(
        st.lists(finite_complex, min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    ).map(lambda r: np.array(r, dtype=complex))


# -- delta_embed ---------------------------------------------------------------


def test_embed_identity_case():
    m = delta_embed(np.eye(1), np.zeros((1, 1)))
    assert_allclose(m.full, np.eye(2))


def test_embed_real_conjugation():
    m = delta_embed(np.zeros((1, 1)), [[1.0]])
    assert_allclose(m.full, [[0, 1], [1, 0]])


def test_embed_complex_conjugation():
    m = delta_embed(0, [[-0.5j]])
    assert_allclose(m.full, [[0, -0.5j], [0.5j, 0]])


def test_embed_shape_mismatch():
    with pytest.raises(ValueError, match="share a shape"):
        delta_embed(np.eye(2), np.zeros((1, 1)))


def test_embed_rejects_nonfinite():
    with pytest.raises(ValueError, match="non-finite"):
        delta_embed([[np.inf]], [[0.0]])


# -- is_delta_structured ---------------------------------------------------------


def test_structured_identity():
    assert is_delta_structured(np.eye(2), 1e-12)


def test_structured_rejects_rotation():
    assert not is_delta_structured(np.array([[0, 1], [-1, 0]]), 1e-12)


def test_signature_is_not_structured():
    # conj(1) = 1 != -1 in the lower right block
    assert not is_delta_structured(signature_matrix(1), 1e-12)


def test_structured_odd_dims():
    with pytest.raises(ValueError, match="even dimensions"):
        is_delta_structured(np.eye(3))


# -- adjoint ---------------------------------------------------------------------


def test_adjoint_scalar():
    assert_allclose(adjoint([[1j]]), [[-1j]])


def test_adjoint_real_symmetric_fixed_point():
    m = np.array([[1.0, 2.0], [2.0, 5.0]])
    assert_allclose(adjoint(m), m)


@given(a1=complex_block(2, 3), a2=complex_block(2, 3))
def test_adjoint_of_doubled_swaps_blocks(a1, a2):
    # adjoint(delta(a1, a2)) == delta(adjoint(a1), transpose(a2))
    lhs = adjoint(delta_embed(a1, a2).full)
    rhs = delta_embed(a1.conj().T, a2.T).full
    assert_allclose(lhs, rhs)


@given(m=complex_block(3, 2))
def test_adjoint_involution_exact(m):
    assert np.array_equal(adjoint(adjoint(m)), m)


# -- inertia ----------------------------------------------------------------------


def test_inertia_examples():
    assert inertia(np.diag([1.0, -1.0])) == (1, 0, 1)
    assert inertia(np.zeros((2, 2))) == (0, 2, 0)
    assert inertia(np.diag([2.0, 3.0, -5.0, 0.0]), tol=1e-9) == (2, 1, 1)


def test_inertia_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        inertia(np.array([[0, 1], [0, 0]], dtype=complex))


# -- signature matrix ---------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 4])
def test_signature_matrix_properties(n):
    j = SignatureMatrix(n).full
    assert_allclose(j @ j, np.eye(2 * n))
    assert_allclose(j, adjoint(j))
    assert inertia(j) == (n, 0, n)


# -- structural closure properties ---------------------------------------------------


@settings(max_examples=60)
@given(a1=complex_block(2, 3), a2=complex_block(2, 3))
def test_embed_always_structured(a1, a2):
    assert is_delta_structured(delta_embed(a1, a2).full, 1e-12)


@settings(max_examples=60)
@given(
    a1=complex_block(2, 2),
    a2=complex_block(2, 2),
    b1=complex_block(2, 2),
    b2=complex_block(2, 2),
)
def test_structure_closed_under_product_and_sum(a1, a2, b1, b2):
    a = delta_embed(a1, a2).full
    b = delta_embed(b1, b2).full
    # scale-aware tolerance; entries may reach ~1e6 after a product
    scale = 1.0 + np.abs(a).max() * np.abs(b).max()
    assert is_delta_structured(a @ b, 1e-9 * scale)
    assert is_delta_structured(a + b, 1e-9 * (1.0 + np.abs(a).max() + np.abs(b).max()))


def test_blocks_round_trip():
    rng = np.random.default_rng(3)
    b1 = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    b2 = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    full = delta_embed(b1, b2).full
    r1, r2 = delta_blocks(full)
    assert_allclose(r1, b1)
    assert_allclose(r2, b2)


def test_stacking_keeps_structure():
    rng = np.random.default_rng(4)
    blocks = [
        delta_embed(rng.standard_normal((2, w)), rng.standard_normal((2, w))).full
        for w in (1, 2)
    ]
    wide = hstack_delta(blocks)
    assert wide.shape == (4, 6)
    assert is_delta_structured(wide, 1e-12)
    tall = vstack_delta([adjoint(b) for b in blocks])
    assert tall.shape == (6, 4)
    assert is_delta_structured(tall, 1e-12)


def test_subsystem_permutation_restores_structure():
    rng = np.random.default_rng(5)
    f1 = delta_embed(
        rng.standard_normal((1, 1)), rng.standard_normal((1, 1))
    ).full
    f2 = delta_embed(
        rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
    ).full
    mixed = np.zeros((6, 6), dtype=complex)
    mixed[:2, :2] = f1
    mixed[2:, 2:] = f2
    perm = subsystem_permutation([1, 2])
    assert not is_delta_structured(mixed, 1e-12)
    assert is_delta_structured(mixed[np.ix_(perm, perm)], 1e-12)


# -- JSON literals --------------------------------------------------------------------


def test_matrix_json_round_trip():
    m = np.array([[1 + 2j, -0.5], [0.25j, 3]], dtype=complex)
    assert_allclose(matrix_from_json(matrix_to_json(m)), m)


def test_matrix_json_rejects_bad_entries():
    with pytest.raises(ValueError, match="re, im"):
        matrix_from_json([[1.0, 2.0]])
    with pytest.raises(ValueError, match="array of arrays"):
        matrix_from_json("nope")


def test_as_complex_matrix_scalar_promotion():
    assert as_complex_matrix(2.5).shape == (1, 1)
