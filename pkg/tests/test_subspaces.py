import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import exact_rank
from zequa.activation import family_diagonals, family_spanning
from zequa.errors import ChannelError, DimensionError, PreconditionError
from zequa.linalg import I2, SX, SY, SZ, dagger, matrix_unit
from zequa.subspaces import (KrausChannel, NoncommGraph, complement, conjugate, contains,
                             dephasing_graph, from_kraus, from_spanning, full_graph,
                             identity_graph, is_diagonal_algebra, is_noncomm_graph, pauli_graph,
                             random_graph, random_subspace, tensor, tensor_power)


def span(*mats):
    return from_spanning(list(mats))


def test_from_spanning_examples():
    assert from_spanning([I2]).dim == 1
    assert from_spanning([I2, SZ, 3 * SZ]).dim == 2
    b = family_spanning(3)
    assert exact_rank(b) == 6
    assert from_spanning(b).dim == 6


def test_from_spanning_shape_mismatch():
    with pytest.raises(DimensionError):
        from_spanning([I2, np.eye(3)])


def test_from_kraus_identity_and_dephasing():
    assert from_kraus(KrausChannel((I2,))).same_span(identity_graph(2))
    g = from_kraus(KrausChannel((np.sqrt(0.7) * I2, np.sqrt(0.3) * SY)))
    assert g.same_span(span(I2, SY))
    assert dephasing_graph(0.3).same_span(span(I2, SY))


def test_from_kraus_depolarizing_is_everything():
    paulis = [I2, SX, SY, SZ]
    g = from_kraus(KrausChannel(tuple(p / 2 for p in paulis)))
    products = [dagger(a) @ b for a in paulis for b in paulis]
    assert exact_rank(products) == 4
    assert g.dim == 4


def test_incomplete_kraus_rejected():
    with pytest.raises(ChannelError):
        KrausChannel((I2, SX))


def test_complement_examples(T3):
    c = complement(identity_graph(2))
    assert c.dim == 3
    assert c.same_span(span(SX, SY, SZ))
    assert complement(pauli_graph("I-X-Z")).same_span(span(SY))
    assert complement(T3).same_span(from_spanning(family_spanning(3)))


def test_tensor_examples(T3):
    assert tensor(identity_graph(2), identity_graph(2)).same_span(identity_graph(4))
    iz = pauli_graph("I-Z")
    diag = span(*[matrix_unit(t, t, 4) for t in range(4)])
    assert tensor(iz, iz).same_span(diag)
    # oracle: dim T3 = 16 - rank of the six spanning matrices
    assert T3.dim == 16 - exact_rank(family_spanning(3)) == 10
    prod = tensor(identity_graph(2), T3)
    assert prod.dim == 10 and prod.shape == (8, 8)


def test_contains_examples(T3):
    ci = identity_graph(2)
    assert contains(ci, 5 * I2)
    assert not contains(ci, SZ)
    upper = family_diagonals(3)[:3]
    for m in upper:
        assert contains(T3, m)


def test_is_noncomm_graph_examples():
    assert is_noncomm_graph(pauli_graph("I-Z"))
    check = is_noncomm_graph(span(SZ))
    assert not check and not check.has_identity and check.dagger_closed
    check = is_noncomm_graph(span(I2, matrix_unit(0, 1, 2)))
    assert not check and not check.dagger_closed
    assert "adjoint" in check.diagnostic
    with pytest.raises(DimensionError):
        is_noncomm_graph(random_subspace(2, 3, 2, np.random.default_rng(0)))


def test_noncomm_graph_constructor_validates():
    with pytest.raises(PreconditionError):
        NoncommGraph.from_subspace(span(SZ))


def test_conjugate_examples():
    assert conjugate(identity_graph(2)).same_span(identity_graph(2))
    assert conjugate(span(SY)).same_span(span(SY))
    m = matrix_unit(0, 1, 2) + 1j * matrix_unit(1, 0, 2)
    conj = matrix_unit(0, 1, 2) - 1j * matrix_unit(1, 0, 2)
    assert conjugate(span(m)).same_span(span(conj))


def test_conjugate_involution(rng):
    s = random_subspace(3, 2, 3, rng)
    assert conjugate(conjugate(s)).same_span(s)


def test_tensor_power_and_diagonal_recognition():
    iz = pauli_graph("I-Z")
    for k in (1, 2, 3):
        assert is_diagonal_algebra(tensor_power(iz, k))
    assert not is_diagonal_algebra(identity_graph(2))
    assert not is_diagonal_algebra(full_graph(2))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 5), frac=st.floats(0, 1))
def test_double_complement(seed, n, frac):
    rng = np.random.default_rng(seed)
    dim = int(round(frac * n * n))
    s = random_subspace(n, n, dim, rng)
    cc = complement(complement(s))
    assert cc.dim == s.dim
    assert np.linalg.norm(cc.projector() - s.projector()) < 1e-9
    assert s.dim + complement(s).dim == n * n
    if s.dim and complement(s).dim:
        assert np.max(np.abs(s.basis.reshape(s.dim, -1).conj() @ complement(s).basis.reshape(-1, n * n).T)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4), count=st.integers(1, 4))
def test_random_channel_gives_graph(seed, n, count):
    rng = np.random.default_rng(seed)
    # Kraus operators from an isometry: stacked blocks of a random unitary's first n columns
    z = rng.standard_normal((n * count, n)) + 1j * rng.standard_normal((n * count, n))
    q, _ = np.linalg.qr(z)
    kraus = tuple(q[k * n:(k + 1) * n] for k in range(count))
    assert is_noncomm_graph(from_kraus(KrausChannel(kraus)))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_tensor_projector_is_kron_of_projectors(seed):
    rng = np.random.default_rng(seed)
    s = random_subspace(2, 2, int(rng.integers(1, 5)), rng)
    t = random_subspace(3, 2, int(rng.integers(1, 7)), rng)
    st_ = tensor(s, t)
    assert st_.dim == s.dim * t.dim
    # the product basis is indexed (i,k),(j,l); compare in that vectorization
    ps = s.projector().reshape(2, 2, 2, 2)
    pt = t.projector().reshape(3, 2, 3, 2)
    expected = np.einsum("ijab,klcd->ikjlacbd", ps, pt).reshape(24, 24)
    assert np.linalg.norm(st_.projector() - expected) < 1e-10


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4))
def test_member_of_both_sides_is_zero(seed, n):
    rng = np.random.default_rng(seed)
    s = random_subspace(n, n, int(rng.integers(1, n * n)), rng)
    c = complement(s)
    for m in (s.basis[0], c.basis[0], s.basis[0] + c.basis[0], 1e-12 * s.basis[0]):
        both = contains(s, m) and contains(c, m)
        assert both == (np.linalg.norm(m) < 1e-10)


def test_random_graph_is_graph(rng):
    for extra in range(4):
        g = random_graph(2, extra, rng)
        assert is_noncomm_graph(g)
        assert g.dim == extra + 1
