"""Search for rank-one matrices inside an operator subspace.

The search maximizes the top singular value of M(c) = sum_k c_k B_k over unit
coefficient vectors c. The basis is HS-orthonormal, so |M(c)|_F = 1 and

    1 - sigma_1(M)^2 = sum_{k>=2} sigma_k(M)^2,

which vanishes exactly on rank-one elements. Each step takes the top
singular pair (u, v) of M and replaces c by the normalized projection of
u v^dag onto the subspace; sigma_1 never decreases along the way.

A ``found`` verdict carries a checked certificate. ``not_found`` is only
evidence: the search is local and restarted from random points.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .subspaces import complement

CERT_RESIDUAL_TOL = 1e-6
EXACT_1D_TOL = 1e-10
# restarts run in index-aligned batches of size 1, 2, 4, ... up to this
MAX_BATCH = 32


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 256
    max_iters: int = 5000
    tol: float = 1e-7

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def replace(self, **kw):
        return SearchConfig(**{**self.__dict__, **kw})


def restart_rng(seed, restart):
    """Generator for one restart.

    The sub-seed is numpy's SeedSequence hash of ``seed`` with spawn key
    ``(restart,)``, so restart r draws the same numbers no matter how many
    other restarts run or in which order.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart,)))


def restart_batches(restarts):
    start, size = 0, 1
    while start < restarts:
        yield range(start, min(start + size, restarts))
        start += size
        size = min(2 * size, MAX_BATCH)


def random_unit(rng, n):
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


@dataclass
class RankOneCertificate:
    coeffs: np.ndarray
    left: np.ndarray
    right: np.ndarray
    sigma_ratio: float

    def matrix(self, space):
        return space.combine(self.coeffs)


@dataclass
class RankOneResult:
    verdict: str
    best_ratio: float
    restarts_used: int
    seed: int
    certificate: Optional[RankOneCertificate] = None
    method: str = "search"
    notes: list = field(default_factory=list)

    @property
    def found(self):
        return self.verdict == "found"


def _certify(space, coeffs, tol):
    coeffs = coeffs / np.linalg.norm(coeffs)
    m = space.combine(coeffs)
    u, s, vh = np.linalg.svd(m)
    ratio = float(s[1] / s[0]) if len(s) > 1 else 0.0
    if ratio >= tol:
        return None, ratio
    left, right = u[:, 0], vh[0].conj()
    err = np.linalg.norm(m - s[0] * np.outer(left, right.conj())) / s[0]
    if err >= CERT_RESIDUAL_TOL:
        return None, ratio
    return RankOneCertificate(coeffs, left, right, ratio), ratio


def _ascend(basis, c, max_iters, tol):
    """Alternating sigma_1 ascent for a batch of starting points.

    ``c`` has shape (restarts, dim). Each row is iterated independently until
    its sigma_2/sigma_1 ratio drops below ``tol * 1e-3``, or its tail
    1 - sigma_1^2 stops decreasing for 20 consecutive steps, or ``max_iters``
    runs out. Returns the final rows and their ratios.
    """
    d = basis.shape[0]
    flat = basis.reshape(d, -1)
    flat_conj_t = flat.conj().T
    rows, cols = basis.shape[1:]
    c = c.copy()
    nrun = c.shape[0]
    ratio = np.ones(nrun)
    prev_tail = np.full(nrun, np.inf)
    stall = np.zeros(nrun, dtype=int)
    active = np.ones(nrun, dtype=bool)
    for _ in range(max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        m = (c[idx] @ flat).reshape(-1, rows, cols)
        u, s, vh = np.linalg.svd(m)
        ratio[idx] = s[:, 1] / s[:, 0]
        tail = 1.0 - s[:, 0] ** 2 / np.sum(s ** 2, axis=1)
        slow = tail > prev_tail[idx] * (1 - 1e-9)
        stall[idx] = np.where(slow, stall[idx] + 1, 0)
        prev_tail[idx] = np.minimum(prev_tail[idx], tail)
        done = (ratio[idx] < tol * 1e-3) | (stall[idx] >= 20)
        step = ~done
        active[idx[done]] = False
        if not step.any():
            continue
        go = idx[step]
        x = u[step, :, 0, None] * vh[step, None, 0, :]
        cn = x.reshape(go.size, -1) @ flat_conj_t
        c[go] = cn / np.linalg.norm(cn, axis=1, keepdims=True)
    return c, ratio


def rank_one_exact_1d(space):
    if space.dim != 1:
        raise PreconditionError("rank_one_exact_1d needs a one-dimensional subspace")
    cert, ratio = _certify(space, np.ones(1, dtype=complex), EXACT_1D_TOL)
    verdict = "found" if cert is not None else "not_found"
    return RankOneResult(verdict, ratio, 0, 0, cert, method="exact_1d")


def find_rank_one(space, cfg=None):
    cfg = cfg or SearchConfig()
    if space.dim == 0:
        return RankOneResult("not_found", float("inf"), 0, cfg.seed,
                             notes=["empty subspace"])
    if min(space.shape) == 1:
        # every nonzero row or column vector is rank one
        cert, ratio = _certify(space, np.eye(space.dim, dtype=complex)[0], cfg.tol)
        return RankOneResult("found", ratio, 0, cfg.seed, cert, method="trivial")
    best = np.inf
    for ids in restart_batches(cfg.restarts):
        c0 = np.array([random_unit(restart_rng(cfg.seed, r), space.dim) for r in ids])
        c, ratios = _ascend(space.basis, c0, cfg.max_iters, cfg.tol)
        for k, r in enumerate(ids):
            if ratios[k] < cfg.tol:
                cert, ratio = _certify(space, c[k], cfg.tol)
                if cert is not None:
                    return RankOneResult("found", ratio, r + 1, cfg.seed, cert)
        best = min(best, float(ratios.min()))
    return RankOneResult("not_found", best, cfg.restarts, cfg.seed)


@dataclass
class ZeroCapacityEvidence:
    status: str  # "certified_positive" or "likely_zero"
    search: RankOneResult
    complement_dim: int


def capacity_is_zero(graph, cfg=None):
    """A rank-one x y^dag orthogonal to the graph gives two codewords, so alpha >= 2.

    Without one, alpha = 1; the search can only report that as likely.
    """
    comp = complement(graph)
    res = find_rank_one(comp, cfg)
    status = "certified_positive" if res.found else "likely_zero"
    return ZeroCapacityEvidence(status, res, comp.dim)
