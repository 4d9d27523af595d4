import numpy as np
import pytest

from zequa.activation import family_spanning
from zequa.errors import PreconditionError
from zequa.linalg import I2, SY, SZ, matrix_unit
from zequa.rankone import (SearchConfig, capacity_is_zero, find_rank_one, rank_one_exact_1d,
                           restart_batches, restart_rng)
from zequa.subspaces import (complement, contains, from_spanning, full_graph, pauli_graph,
                             random_subspace, zero_space)

# min sigma2/sigma1 over a 10^4-restart run on the m=3 family complement (seed 0)
FAMILY3_FLOOR = 0.4747560526851066


def span(*mats):
    return from_spanning(list(mats))


def assert_sound(space, res):
    m = res.certificate.matrix(space)
    s = np.linalg.svd(m, compute_uv=False)
    assert contains(space, m, 1e-8)
    assert s[1] / s[0] < 1e-6


def test_config_defaults_and_validation():
    cfg = SearchConfig()
    assert (cfg.seed, cfg.restarts, cfg.max_iters, cfg.tol) == (0, 256, 5000, 1e-7)
    with pytest.raises(ValueError):
        SearchConfig(tol=0)
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    assert cfg.replace(seed=3).seed == 3


def test_restart_streams_are_independent_of_batching():
    a = restart_rng(7, 5).standard_normal(3)
    b = restart_rng(7, 5).standard_normal(3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, restart_rng(7, 6).standard_normal(3))
    sizes = [len(b) for b in restart_batches(100)]
    assert sizes == [1, 2, 4, 8, 16, 32, 32, 5]


def test_full_rank_singleton_not_found():
    res = find_rank_one(span(SY), SearchConfig(restarts=8))
    assert not res.found
    assert res.best_ratio == pytest.approx(1.0)


def test_basis_element_rank_one_found():
    s = span(matrix_unit(0, 1, 2), matrix_unit(0, 0, 2))
    res = find_rank_one(s)
    assert res.found
    assert_sound(s, res)
    assert abs(abs(res.certificate.left[0]) - 1) < 1e-8


def test_family_complement_not_found():
    comp = from_spanning(family_spanning(3))
    res = find_rank_one(comp, SearchConfig(restarts=256))
    assert not res.found
    assert res.restarts_used == 256
    assert res.best_ratio >= FAMILY3_FLOOR / 2


def test_empty_subspace_sentinel():
    res = find_rank_one(zero_space(3, 3))
    assert not res.found and res.best_ratio == np.inf


def test_exact_1d_examples():
    assert not rank_one_exact_1d(span(SY)).found
    assert rank_one_exact_1d(span(matrix_unit(0, 1, 2))).found
    b01 = matrix_unit(0, 1, 4) + matrix_unit(1, 2, 4)
    res = rank_one_exact_1d(span(b01))
    assert not res.found
    np.testing.assert_allclose(np.linalg.svd(b01, compute_uv=False), [1, 1, 0, 0], atol=1e-15)
    with pytest.raises(PreconditionError):
        rank_one_exact_1d(span(I2, SZ))


def test_exact_and_search_agree_on_lines(rng):
    lines = [SY, I2, matrix_unit(1, 0, 3), np.outer([1, 2j, 0], [1, 1, 1])]
    lines += [rng.standard_normal((3, 3)) for _ in range(5)]
    lines += [np.outer(rng.standard_normal(4), rng.standard_normal(2)) for _ in range(3)]
    for m in lines:
        s = span(m)
        assert find_rank_one(s, SearchConfig(restarts=4)).found == rank_one_exact_1d(s).found


def test_capacity_is_zero_examples():
    ev = capacity_is_zero(pauli_graph("I-Z"))
    assert ev.status == "certified_positive"
    assert ev.complement_dim == 2
    ev = capacity_is_zero(pauli_graph("I-X-Z"), SearchConfig(restarts=32))
    assert ev.status == "likely_zero"
    ev = capacity_is_zero(full_graph(2))
    assert ev.status == "likely_zero" and ev.complement_dim == 0


def test_determinism():
    comp = from_spanning(family_spanning(3))
    cfg = SearchConfig(seed=11, restarts=16)
    a, b = find_rank_one(comp, cfg), find_rank_one(comp, cfg)
    assert (a.verdict, a.best_ratio, a.restarts_used) == (b.verdict, b.best_ratio, b.restarts_used)
    s = span(matrix_unit(0, 1, 3) + 0.5 * matrix_unit(0, 2, 3), np.eye(3))
    a, b = find_rank_one(s, cfg), find_rank_one(s, cfg)
    assert a.found and np.array_equal(a.certificate.coeffs, b.certificate.coeffs)


def planted(rng, n=3, extra=2):
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    mats = [np.outer(x, y.conj())]
    mats += [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(extra)]
    return from_spanning(mats)


def test_planted_rank_one_always_found():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        s = planted(rng)
        res = find_rank_one(s)
        assert res.found
        assert_sound(s, res)


def test_generic_small_subspace_has_no_rank_one(rng):
    # rank-one 3x3 matrices form a 4-dim projective variety in P^8; a generic line misses it
    s = random_subspace(3, 3, 2, rng)
    assert not find_rank_one(s, SearchConfig(restarts=32)).found
    # while a generic subspace of dimension >= 5 meets it
    s = random_subspace(3, 3, 6, rng)
    res = find_rank_one(s)
    assert res.found
    assert_sound(s, res)


def test_complement_of_identity_contains_rank_one():
    c = complement(pauli_graph("I2"))
    res = find_rank_one(c)
    assert res.found
    assert_sound(c, res)
