"""Combining graphs: activation tests, the B_ij family and its verifiers."""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .capacity import (CapacityReport, Codebook, alpha_lower, capacity, make_codebook,
                       product_codebook)
from .errors import DimensionError, InvalidCodewordError, NumericError, PreconditionError
from .linalg import matrix_unit
from .rankone import RankOneResult, SearchConfig, find_rank_one, random_unit, restart_rng
from .subspaces import (NoncommGraph, complement, from_spanning,
                        identity_graph, qubit_graphs, tensor)

FAMILY_MAX_M = 7
BILINEAR_RESTARTS = 64
BILINEAR_FEASIBLE_TOL = 1e-8
SCHMIDT_CUTOFF = 1e-10
COLLAPSE_TOL = 1e-8


# the activating family

def family_spanning(m):
    """The m(m-1) matrices |i><j| + |i+1><j+1| on C^(m+1), 0 <= i != j <= m-1."""
    d = m + 1
    return [matrix_unit(i, j, d) + matrix_unit(i + 1, j + 1, d)
            for i in range(m) for j in range(m) if i != j]


def family_codewords(m):
    """(|0>|i> + |1>|i+1>)/sqrt(2) for i = 0..m-1, as rows."""
    d = m + 1
    out = np.zeros((m, 2 * d), dtype=complex)
    for i in range(m):
        out[i, i] = out[i, d + i + 1] = 1 / np.sqrt(2)
    return out


@dataclass
class FamilyInstance:
    m: int
    T: NoncommGraph
    spanning_complement: list
    combined: NoncommGraph
    codebook: Codebook


def family_graph(m):
    if m < 3:
        raise PreconditionError("the family is defined for m >= 3")
    return NoncommGraph.from_subspace(complement(from_spanning(family_spanning(m))))


def family_T(m, max_m=FAMILY_MAX_M):
    if m < 3:
        raise PreconditionError("the family is defined for m >= 3")
    if m > max_m:
        raise PreconditionError(f"m = {m} above the family cap {max_m}")
    spanning = family_spanning(m)
    t = family_graph(m)
    combined = tensor(identity_graph(2), t)
    book = make_codebook(combined, family_codewords(m))
    if not book.valid:
        raise NumericError("family codebook failed verification")
    return FamilyInstance(m, t, spanning, combined, book)


def family_diagonals(m):
    """Elements of T_m along each diagonal, in the order

    sum_k (-1)^k |k><j+k| for j = 1..m, then |i><i| for i = 0..m, then
    sum_k (-1)^k |j+k><k| for j = 1..m.
    """
    d = m + 1
    upper, lower = [], []
    for j in range(1, m + 1):
        u = np.zeros((d, d), dtype=complex)
        for k in range(m - j + 1):
            u[k, j + k] = (-1) ** k
        upper.append(u)
        lower.append(u.T.copy())
    diag = [matrix_unit(i, i, d) for i in range(d)]
    return upper + diag + lower


# activation reports

@dataclass
class ActivationReport:
    alpha_S: CapacityReport
    alpha_T: CapacityReport
    alpha_combined: CapacityReport
    activated: bool
    caveat: str


def _zero_status(rep):
    if rep.best_alpha > 1:
        return None
    if rep.alpha_exact == 1:
        return "structural" if rep.method != "qubit_exact" else "exact (qubit classification)"
    why = []
    if rep.zero_evidence is not None:
        why.append("rank-one search of the complement found nothing, best sigma2/sigma1 "
                   f"{rep.zero_evidence.search.best_ratio:.3g}")
    if rep.failed_search is not None and rep.failed_search.m == 2:
        why.append(f"no 2-codeword set found, best penalty {rep.failed_search.best_penalty:.3g}")
    return "heuristic (" + "; ".join(why or ["no certificate of alpha >= 2"]) + ")"


def activation_report(rep_s, rep_t, rep_c):
    a_s, a_t = rep_s.best_alpha, rep_t.best_alpha
    activated = rep_c.alpha_lower > a_s * a_t and rep_c.codebook is not None \
        and rep_c.codebook.valid
    parts = []
    for name, rep in (("S", rep_s), ("T", rep_t)):
        status = _zero_status(rep)
        if status:
            parts.append(f"alpha({name}) = 1 is {status}")
    if activated and a_s == 1 and a_t == 1:
        parts.append("both factors have alpha = 1: superactivation")
    parts.append("the combined lower bound is certified by a verified codebook; "
                 "asymptotic capacities are not evaluated")
    return ActivationReport(rep_s, rep_t, rep_c, activated, "; ".join(parts))


def check_activation(s, t, cfg=None, combined_codebook=None):
    """Compare alpha(S (x) T) against alpha(S) alpha(T)."""
    cfg = cfg or SearchConfig()
    rep_s = capacity(s, cfg)
    rep_t = capacity(t, cfg)
    g = tensor(s, t)
    warm = combined_codebook
    if warm is None and rep_s.codebook is not None and rep_t.codebook is not None:
        warm = product_codebook(rep_s.codebook, rep_t.codebook)
    rep_c = alpha_lower(g, cfg, warm_start=warm)
    return activation_report(rep_s, rep_t, rep_c)


# bilinear feasibility

@dataclass
class BilinearWitness:
    A: np.ndarray
    B: np.ndarray
    residual: float
    feasible: bool
    restarts_used: int
    seed: int


def bilinear_residual(s, t, a, b):
    """max over basis pairs of |Tr[P^dag A conj(Q) B]|."""
    vals = np.einsum("pki,ij,qjl,lk->pq", np.conj(s.basis).transpose(0, 2, 1), a,
                     np.conj(t.basis), b)
    return float(np.max(np.abs(vals))) if vals.size else 0.0


def _rows_for_a(pd, qbar, b):
    # Tr[P^dag A Qbar B] = sum_ij A_ij (Qbar B P^dag)_ji
    x = np.einsum("qjl,lk,pki->pqij", qbar, b, pd)
    return x.reshape(-1, x.shape[2] * x.shape[3])


def _rows_for_b(pd, qbar, a):
    # Tr[P^dag A Qbar B] = sum_lk B_lk (P^dag A Qbar)_kl
    y = np.einsum("pki,ij,qjl->pqlk", pd, a, qbar)
    return y.reshape(-1, y.shape[2] * y.shape[3])


def _smallest(rows):
    _, sv, vh = np.linalg.svd(rows, full_matrices=True)
    resid = sv[-1] if rows.shape[0] >= rows.shape[1] else 0.0
    return vh[-1].conj(), float(resid)


def bilinear_feasibility(s, t, cfg=None, restarts=BILINEAR_RESTARTS):
    """Search for nonzero A, B with Tr[P^dag A conj(Q) B] = 0 for all P in S, Q in T.

    For S in C^(m1 x n1) and T in C^(m2 x n2), A is m1 x m2 and B is n2 x n1.
    With B fixed the conditions are linear in A, and the unit A of least
    violation is the bottom right singular vector of the constraint rows;
    the search alternates between the two. Such a pair exists exactly when
    the complement of S (x) T contains a rank-one matrix.
    """
    cfg = cfg or SearchConfig()
    m1, n1 = s.shape
    m2, n2 = t.shape
    pd = np.conj(s.basis).transpose(0, 2, 1)
    qbar = np.conj(t.basis)
    best = None
    for r in range(restarts):
        rng = restart_rng(cfg.seed, r)
        b = random_unit(rng, n2 * n1).reshape(n2, n1)
        prev = np.inf
        stall = 0
        for _ in range(cfg.max_iters):
            av, _ = _smallest(_rows_for_a(pd, qbar, b))
            a = av.reshape(m1, m2)
            bv, resid = _smallest(_rows_for_b(pd, qbar, a))
            b = bv.reshape(n2, n1)
            if resid < BILINEAR_FEASIBLE_TOL * 1e-3:
                break
            stall = stall + 1 if resid > prev * (1 - 1e-6) else 0
            if stall >= 20:
                break
            prev = min(prev, resid)
        res = bilinear_residual(s, t, a, b)
        if best is None or res < best.residual:
            best = BilinearWitness(a, b, res, res < BILINEAR_FEASIBLE_TOL, r + 1, cfg.seed)
        if best.feasible:
            return best
    best.restarts_used = restarts
    return best


def witness_from_vectors(psi, phi, shape_s, shape_t):
    """A, B built from a rank-one |psi><phi| orthogonal to S (x) T."""
    (m1, n1), (m2, n2) = shape_s, shape_t
    a = np.asarray(psi).reshape(m1, m2)
    b = np.asarray(phi).reshape(n1, n2).conj().T
    return a / np.linalg.norm(a), b / np.linalg.norm(b)


@dataclass
class CrossCheck:
    rank_one: RankOneResult
    bilinear: BilinearWitness

    @property
    def agree(self):
        return self.rank_one.found == self.bilinear.feasible

    def __bool__(self):
        return self.agree


def lemma5_crosscheck(s, t, cfg=None):
    """Rank-one search in the complement of S (x) T against the bilinear search."""
    if s.rows != s.cols or t.rows != t.cols:
        raise DimensionError("crosscheck needs square ambients")
    cfg = cfg or SearchConfig()
    r1 = find_rank_one(complement(tensor(s, t)), cfg)
    r2 = bilinear_feasibility(s, t, cfg)
    return CrossCheck(r1, r2)


# Schmidt collapse onto one factor

def schmidt_collapse(phi, psi, s, n):
    """Codeword pairs for S from a pair orthogonal to S (x) L(C^n).

    Returns the left Schmidt vectors of ``phi`` and of ``psi`` (coefficients
    above 1e-10), as rows; every |lambda_s><mu_t| is orthogonal to S.
    """
    d = s.rows
    phi = np.asarray(phi, dtype=complex).ravel()
    psi = np.asarray(psi, dtype=complex).ravel()
    if phi.size != d * n or psi.size != d * n:
        raise DimensionError(f"states must live on C^{d} (x) C^{n}")
    mphi, mpsi = phi.reshape(d, n), psi.reshape(d, n)
    pre = max(np.linalg.norm(mphi.conj().T @ a @ mpsi) for a in s.basis)
    if pre >= COLLAPSE_TOL:
        raise InvalidCodewordError(f"|phi><psi| is not orthogonal to S (x) L(C^n): residual {pre:.3e}")
    lefts = _schmidt_left(mphi)
    rights = _schmidt_left(mpsi)
    worst = max(abs(np.vdot(x, a @ y)) for a in s.basis for x in lefts for y in rights)
    if worst >= COLLAPSE_TOL:
        raise NumericError(f"collapsed vectors violate the codeword condition: {worst:.3e}")
    return lefts, rights


def _schmidt_left(mat):
    u, sv, _ = np.linalg.svd(mat, full_matrices=False)
    return u[:, sv > SCHMIDT_CUTOFF].T


def collapse_residual(phi, psi, s, n):
    d = s.rows
    mphi = np.asarray(phi).reshape(d, n)
    mpsi = np.asarray(psi).reshape(d, n)
    return max(float(np.linalg.norm(mphi.conj().T @ a @ mpsi)) for a in s.basis)


# structure of three codewords on C^2 (x) C^n

@dataclass
class Prop2Report:
    nonzero: bool
    v_w_independent: bool
    w_pairs_independent: bool
    details: dict = field(default_factory=dict)

    @property
    def all_hold(self):
        return self.nonzero and self.v_w_independent and self.w_pairs_independent


def _second_sv(x, y):
    return float(np.linalg.svd(np.column_stack([x, y]), compute_uv=False)[1])


def prop2_verify(vectors, n, tol=1e-10):
    """Split psi_i = |0>|v_i> + |1>|w_i> and test the three structural properties."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if vectors.shape[1] != 2 * n:
        raise DimensionError(f"vectors of length {vectors.shape[1]} do not split as 2 x {n}")
    if vectors.shape[0] != 3:
        raise PreconditionError("the structure check takes exactly three codewords")
    v, w = vectors[:, :n], vectors[:, n:]
    norms = [float(np.linalg.norm(x)) for x in itertools.chain(v, w)]
    vw = [_second_sv(v[i], w[i]) for i in range(3)]
    ww = {f"{i}{j}": _second_sv(w[i], w[j]) for i, j in itertools.combinations(range(3), 2)}
    return Prop2Report(min(norms) > tol, min(vw) > tol, min(ww.values()) > tol,
                       {"norms": norms, "v_w_sv2": vw, "w_w_sv2": ww})


# qubit suite

@dataclass
class PairResult:
    s: str
    t: str
    alpha_s: int
    alpha_t: int
    alpha_combined: int
    method: str
    activated: bool


@dataclass
class SuiteSummary:
    pairs: list
    full_factor: list  # (name, alpha(S (x) L(C^2)), alpha(S))

    @property
    def ok(self):
        no_act = not any(p.activated for p in self.pairs)
        return no_act and all(a == b for _, a, b in self.full_factor)


def qubit_nonactivation_suite(cfg=None):
    """All 16 ordered pairs of the canonical qubit graphs."""
    cfg = cfg or SearchConfig()
    graphs = qubit_graphs()
    pairs = []
    full_factor = []
    for (ns, s), (nt, t) in itertools.product(graphs.items(), repeat=2):
        rep = check_activation(s, t, cfg)
        c = rep.alpha_combined
        pairs.append(PairResult(ns, nt, rep.alpha_S.best_alpha, rep.alpha_T.best_alpha,
                                c.alpha_lower, c.method, rep.activated))
        if nt == "full:2":
            full_factor.append((ns, c.alpha_lower, rep.alpha_S.best_alpha))
    return SuiteSummary(pairs, full_factor)


def family_membership(m):
    """Largest residual of the diagonal elements in T_m and of the B_ij against T_m."""
    t = family_graph(m)
    diag = max(t.residual(x) / np.linalg.norm(x) for x in family_diagonals(m))
    perp = max(abs(np.vdot(b, x)) for b in family_spanning(m) for x in t.basis)
    return diag, perp
