"""Embedding identities, structure checks, and the dual-norm certificate."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cczsg import (
    DimensionMismatch,
    ZeroVector,
    as_cmat,
    as_cvec,
    dual_norm_certificate,
    embed_mat,
    embed_vec,
    herm_inner,
    lift_mat,
    lift_vec,
)


def _cvec(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _cmat(rng, n, m):
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def test_embed_vec_layout():
    a = np.array([1 + 2j, 3 - 4j])
    np.testing.assert_array_equal(embed_vec(a), [1.0, 3.0, 2.0, -4.0])


def test_embed_mat_layout():
    a = np.array([[1 + 2j]])
    np.testing.assert_array_equal(embed_mat(a), [[1.0, -2.0], [2.0, 1.0]])


@pytest.mark.parametrize("n,m", [(1, 1), (3, 2), (5, 5)])
def test_embedding_properties_fuzz(rng, n, m):
    # the five algebraic identities the rest of the package relies on
    for _ in range(200):
        a = _cmat(rng, n, m)
        b = _cmat(rng, m, n)
        v = _cvec(rng, m)
        w = _cvec(rng, n)
        s = float(rng.standard_normal())
        np.testing.assert_allclose(embed_mat(s * a), s * embed_mat(a), atol=1e-12)
        np.testing.assert_allclose(
            embed_mat(a @ b), embed_mat(a) @ embed_mat(b), atol=1e-10)
        np.testing.assert_allclose(
            embed_vec(a @ v), embed_mat(a) @ embed_vec(v), atol=1e-10)
        np.testing.assert_allclose(
            embed_mat(a.conj().T), embed_mat(a).T, atol=1e-12)
        u = _cvec(rng, n)
        np.testing.assert_allclose(
            embed_vec(u) @ embed_vec(w), np.real(herm_inner(u, w)), atol=1e-10)


def test_embedding_additivity(rng):
    a = _cmat(rng, 4, 3)
    b = _cmat(rng, 4, 3)
    np.testing.assert_allclose(embed_mat(a + b), embed_mat(a) + embed_mat(b), atol=1e-12)


def test_norm_preserved(rng):
    v = _cvec(rng, 7)
    assert abs(np.linalg.norm(embed_vec(v)) - np.linalg.norm(v)) < 1e-12


def test_lift_round_trips(rng):
    v = _cvec(rng, 6)
    a = _cmat(rng, 4, 6)
    np.testing.assert_allclose(lift_vec(embed_vec(v)), v, atol=0)
    np.testing.assert_allclose(lift_mat(embed_mat(a)), a, atol=0)


def test_lift_vec_rejects_odd_length():
    with pytest.raises(DimensionMismatch):
        lift_vec(np.zeros(5))


def test_lift_mat_reads_upper_blocks(rng):
    # documented contract: inverse on the image, taken from the upper blocks
    a = _cmat(rng, 3, 3)
    x = embed_mat(a)
    x[0, 4] += 5.0
    np.testing.assert_allclose(lift_mat(x), a + 0, atol=0)
    with pytest.raises(DimensionMismatch):
        lift_mat(np.zeros((4, 5)))
    with pytest.raises(DimensionMismatch):
        lift_mat(np.zeros(4))


def test_as_cvec_rejects_matrix():
    with pytest.raises(DimensionMismatch):
        as_cvec(np.zeros((2, 2)))


def test_as_cmat_structure_flags(rng):
    h = _cmat(rng, 3, 3)
    h = h + h.conj().T
    as_cmat(h, hermitian=True)
    with pytest.raises(DimensionMismatch):
        as_cmat(h + 1e-6j * np.eye(3), hermitian=True)
    s = _cmat(rng, 3, 3)
    s = s + s.T
    as_cmat(s, symmetric=True)
    with pytest.raises(DimensionMismatch):
        bad = s.copy()
        bad[0, 1] += 1e-6
        as_cmat(bad, symmetric=True)


def test_herm_inner_conjugate_linearity(rng):
    a, b = _cvec(rng, 5), _cvec(rng, 5)
    c = 0.7 - 0.3j
    np.testing.assert_allclose(herm_inner(c * a, b), np.conj(c) * herm_inner(a, b))
    np.testing.assert_allclose(herm_inner(a, c * b), c * herm_inner(a, b))
    np.testing.assert_allclose(herm_inner(a, b), np.conj(herm_inner(b, a)))


def test_herm_inner_dimension_check(rng):
    with pytest.raises(DimensionMismatch):
        herm_inner(_cvec(rng, 3), _cvec(rng, 4))


def test_dual_norm_certificate_achieves_norm(rng):
    for _ in range(50):
        z = _cvec(rng, 6)
        g = dual_norm_certificate(z)
        assert abs(np.linalg.norm(g) - 1.0) < 1e-12
        assert abs(np.real(herm_inner(g, z)) - np.linalg.norm(z)) < 1e-10


def test_dual_norm_certificate_is_tight_upper_bound(rng):
    # no unit vector can beat the certificate value
    z = _cvec(rng, 5)
    best = np.real(herm_inner(dual_norm_certificate(z), z))
    for _ in range(300):
        g = _cvec(rng, 5)
        g = g / np.linalg.norm(g)
        assert np.real(herm_inner(g, z)) <= best + 1e-10


def test_dual_norm_certificate_zero_vector():
    with pytest.raises(ZeroVector):
        dual_norm_certificate(np.zeros(3, dtype=complex))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False,
                                   allow_infinity=False), min_size=1, max_size=8))
def test_embed_lift_inverse_property(vals):
    v = np.asarray(vals, dtype=np.complex128)
    np.testing.assert_array_equal(lift_vec(embed_vec(v)), v)
