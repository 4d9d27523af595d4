import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import exact_rank, kron_loop
from zequa.activation import family_spanning
from zequa.errors import DimensionError, NumericError, SizeError
from zequa.linalg import (I2, SX, SY, SZ, gram, hs_inner, kron, matrix_unit, orthonormalize,
                          singular_values, unvec, vec)


def random_matrix(seed, rows, cols):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def test_hs_inner_examples():
    assert hs_inner(I2, I2) == 2
    assert hs_inner(SX, SZ) == 0
    e01 = matrix_unit(0, 1, 2)
    assert hs_inner(e01, e01) == 1


def test_hs_inner_shape_mismatch():
    with pytest.raises(DimensionError):
        hs_inner(I2, np.eye(3))


def test_kron_examples():
    np.testing.assert_array_equal(kron(I2, I2), np.eye(4))
    np.testing.assert_array_equal(kron(SZ, matrix_unit(0, 0, 2)), np.diag([1, 0, -1, 0]))
    got = kron(matrix_unit(0, 1, 2), matrix_unit(1, 0, 2))
    assert np.array_equal(got, kron_loop(matrix_unit(0, 1, 2), matrix_unit(1, 0, 2)))
    assert np.array_equal(got, matrix_unit(1, 2, 4))


def test_kron_cap():
    with pytest.raises(SizeError):
        kron(np.eye(64), np.eye(65), max_dim=4096)


@pytest.mark.parametrize("shapes", [((2, 3), (3, 2)), ((1, 4), (2, 2)), ((3, 3), (1, 1))])
def test_kron_matches_loop(shapes):
    a = random_matrix(1, *shapes[0])
    b = random_matrix(2, *shapes[1])
    np.testing.assert_allclose(kron(a, b), kron_loop(a, b), atol=1e-14)


def test_singular_values_examples():
    np.testing.assert_allclose(singular_values(SY), [1, 1])
    np.testing.assert_allclose(singular_values(matrix_unit(0, 1, 2)), [1, 0])
    b01 = matrix_unit(0, 1, 3) + matrix_unit(1, 2, 3)
    # oracle: singular values are square roots of the eigenvalues of the row Gram matrix
    row_gram = b01 @ b01.conj().T
    oracle = np.sqrt(np.sort(np.linalg.eigvalsh(row_gram))[::-1].clip(0))
    np.testing.assert_allclose(singular_values(b01), oracle, atol=1e-12)
    np.testing.assert_allclose(singular_values(b01), [1, 1, 0], atol=1e-12)


def test_singular_values_rejects_nonfinite():
    with pytest.raises(NumericError):
        singular_values(np.array([[np.nan, 0], [0, 1]]))


def test_orthonormalize_examples():
    out = orthonormalize([I2, 2 * I2])
    assert len(out) == 1
    np.testing.assert_allclose(out[0], I2 / np.sqrt(2))
    out = orthonormalize([I2, SZ])
    assert len(out) == 2
    np.testing.assert_allclose(gram(out), np.eye(2), atol=1e-12)
    assert orthonormalize([]) == []


def test_orthonormalize_family_matrices():
    mats = family_spanning(3)
    assert len(mats) == 6
    assert exact_rank(mats) == 6
    out = orthonormalize(mats)
    assert len(out) == 6
    np.testing.assert_allclose(gram(out), np.eye(6), atol=1e-10)


def test_vec_is_row_major():
    a = np.arange(6).reshape(2, 3)
    assert list(vec(a)) == [0, 1, 2, 3, 4, 5]
    assert np.array_equal(unvec(vec(a), 2, 3), a)


def _power_iteration(a, iters=2000):
    v = np.ones(a.shape[1], dtype=complex)
    for _ in range(iters):
        v = a.conj().T @ (a @ v)
        v /= np.linalg.norm(v)
    return np.linalg.norm(a @ v)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rows=st.integers(2, 8), cols=st.integers(2, 8))
def test_top_singular_value_is_operator_norm(seed, rows, cols):
    a = random_matrix(seed, rows, cols)
    assert abs(singular_values(a)[0] - _power_iteration(a)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rows=st.integers(1, 6), cols=st.integers(1, 6))
def test_hs_inner_self_is_frobenius(seed, rows, cols):
    a = random_matrix(seed, rows, cols)
    z = hs_inner(a, a)
    assert abs(z.imag) < 1e-12
    assert abs(z.real - np.linalg.norm(a) ** 2) < 1e-12 * max(1, z.real)
    b = random_matrix(seed + 1, rows, cols)
    assert abs(hs_inner(a, b) - np.conj(hs_inner(b, a))) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_kron_associative(seed):
    a, b, c = (random_matrix(seed + k, 2, 3) for k in range(3))
    np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), count=st.integers(1, 9), dim=st.integers(2, 3))
def test_orthonormalize_gram_identity(seed, count, dim):
    mats = [random_matrix(seed + k, dim, dim) for k in range(count)]
    out = orthonormalize(mats)
    assert len(out) == min(count, dim * dim)
    np.testing.assert_allclose(gram(out), np.eye(len(out)), atol=1e-10)
