"""One-shot zero-error capacity: codebook search and exact special cases.

A codebook for a graph S is a list of orthonormal states with
<psi_i|A|psi_j> = 0 for every A in S and i != j. Its maximum size is the
independence number alpha(S), and C0^(1)(S) = log2 alpha(S).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionError, PreconditionError
from .linalg import dagger
from .rankone import SearchConfig, capacity_is_zero, random_unit, restart_rng
from .subspaces import NoncommGraph, complement, is_diagonal_algebra, tensor_power

SUCCESS_PENALTY = 1e-20
ORTHO_TOL = 1e-10
GRAPH_RESIDUAL_TOL = 1e-8


@dataclass
class Codebook:
    graph_dim: int
    vectors: np.ndarray  # shape (m, graph_dim), one state per row
    ortho_residual: float
    graph_residual: float

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def valid(self):
        return self.ortho_residual < ORTHO_TOL and self.graph_residual < GRAPH_RESIDUAL_TOL


@dataclass
class CodebookSearch:
    m: int
    best_penalty: float
    restarts_used: int
    seed: int
    codebook: Optional[Codebook] = None

    @property
    def success(self):
        return self.codebook is not None


@dataclass
class CapacityReport:
    alpha_lower: int
    method: str  # qubit_exact | rank_one_certified | search | trivial
    alpha_exact: Optional[int] = None
    codebook: Optional[Codebook] = None
    power: int = 1
    failed_search: Optional[CodebookSearch] = None
    zero_evidence: Optional[object] = None
    notes: list = field(default_factory=list)

    @property
    def bits_lower(self):
        return float(np.log2(self.alpha_lower))

    @property
    def bits_per_use(self):
        return self.bits_lower / self.power

    @property
    def best_alpha(self):
        return self.alpha_exact if self.alpha_exact is not None else self.alpha_lower


def verify_codebook(graph, vectors):
    """(ortho_residual, graph_residual) of ``vectors`` by direct summation.

    graph_residual is the largest |<psi_i|A|psi_j>|, i != j, over the basis
    elements A rescaled to unit operator norm, so it lies in [0, 1].
    """
    v = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if v.shape[1] != graph.rows:
        raise DimensionError(f"vectors have dim {v.shape[1]}, graph acts on C^{graph.rows}")
    m = v.shape[0]
    gram = v.conj() @ v.T
    ortho = float(np.max(np.abs(gram - np.eye(m))))
    graph_res = 0.0
    for a in graph.basis:
        a = a / np.linalg.norm(a, 2)
        elems = v.conj() @ a @ v.T
        elems[np.diag_indices(m)] = 0
        graph_res = max(graph_res, float(np.max(np.abs(elems))))
    return ortho, graph_res


def make_codebook(graph, vectors):
    v = np.atleast_2d(np.asarray(vectors, dtype=complex))
    ortho, res = verify_codebook(graph, v)
    return Codebook(graph.rows, v, ortho, res)


def product_codebook(first, second):
    vectors = np.array([np.kron(a, b) for a in first.vectors for b in second.vectors])
    ortho = float(np.max(np.abs(vectors.conj() @ vectors.T - np.eye(len(vectors)))))
    return Codebook(first.graph_dim * second.graph_dim, vectors, ortho, np.nan)


class _Penalty:
    """Residual vector and Jacobian of the codebook penalty.

    Unknowns are [Re V, Im V] for V of shape (n, m) whose columns are the
    codewords. Residuals are the real and imaginary parts of
    <psi_i|A_k|psi_j> for i != j, then of <psi_i|psi_j> - delta_ij for i <= j.
    """

    def __init__(self, basis, n, m):
        self.ops = np.concatenate([basis, np.eye(n, dtype=complex)[None]])
        self.n, self.m = n, m
        self.nk = basis.shape[0]
        self.off = ~np.eye(m, dtype=bool)
        self.upper = np.triu(np.ones((m, m), dtype=bool))

    def _unpack(self, x):
        half = self.n * self.m
        return (x[:half] + 1j * x[half:]).reshape(self.n, self.m)

    def _select(self, full):
        # full has shape (nk + 1, m, m, ...): graph terms then the Gram matrix
        return np.concatenate([full[: self.nk][:, self.off].reshape(-1, *full.shape[3:]),
                               full[self.nk][self.upper].reshape(-1, *full.shape[3:])])

    def residuals(self, x):
        v = self._unpack(x)
        full = np.einsum("ai,kab,bj->kij", v.conj(), self.ops, v)
        full[self.nk] -= np.eye(self.m)
        r = self._select(full)
        return np.concatenate([r.real, r.imag])

    def jacobian(self, x):
        v = self._unpack(x)
        n, m = self.n, self.m
        av = np.einsum("kpb,bj->kpj", self.ops, v)  # (A V)_pj
        va = np.einsum("ai,kap->kip", v.conj(), self.ops)  # (V^dag A)_ip
        eye = np.eye(m)
        # d R[k,i,j] / d V[p,q] pieces, axes (k, i, j, p, q)
        t1 = np.einsum("qi,kpj->kijpq", eye, av)
        t2 = np.einsum("qj,kip->kijpq", eye, va)
        d_re = self._select(t1 + t2).reshape(-1, n * m)
        d_im = self._select(-1j * t1 + 1j * t2).reshape(-1, n * m)
        top = np.hstack([d_re.real, d_im.real])
        bottom = np.hstack([d_re.imag, d_im.imag])
        return np.vstack([top, bottom])


def _levenberg_marquardt(fun, jac, x, max_iters):
    """Minimize |fun(x)|^2; returns (x, F).

    Stops at F < 1e-30, after ``max_iters`` trial steps, or once F stays above
    1e-8 while shrinking by less than 0.1% over 10 steps (an infeasible
    basin; feasible runs converge quadratically and never trigger this).
    """
    r = fun(x)
    f = float(r @ r)
    j = jac(x)
    lam = None
    nu = 2.0
    hist = [f]
    for it in range(max_iters):
        if f < 1e-30:
            break
        g = j.T @ r
        a = j.T @ j
        if lam is None:
            lam = 1e-3 * max(float(np.max(np.diag(a))), 1e-12)
        try:
            step = np.linalg.solve(a + lam * np.eye(a.shape[0]), -g)
        except np.linalg.LinAlgError:
            lam *= nu
            nu *= 2
            continue
        pred = -2 * float(g @ step) - float(step @ a @ step)
        xn = x + step
        rn = fun(xn)
        fn = float(rn @ rn)
        rho = (f - fn) / pred if pred > 0 else -1.0
        if rho > 0:
            x, r, f = xn, rn, fn
            j = jac(x)
            lam *= max(1 / 3, 1 - (2 * rho - 1) ** 3)
            nu = 2.0
        else:
            lam *= nu
            nu *= 2
        if np.linalg.norm(step) < 1e-16 * (np.linalg.norm(x) + 1e-16) or lam > 1e16:
            break
        hist.append(f)
        if it >= 30 and f > 1e-8 and f > (1 - 1e-3) * hist[-11]:
            break
    return x, f


def _polish(v):
    # symmetric orthonormalization; moves a feasible point by O(penalty)
    u, _, wh = np.linalg.svd(v, full_matrices=False)
    return u @ wh


def codebook_search(graph, m, cfg=None, start=None):
    """Multi-start Levenberg-Marquardt search for ``m`` codewords.

    Restart r starts from Gaussian states drawn with ``restart_rng(seed, r)``;
    the first restart whose penalty falls below 1e-20 wins. ``start``, an
    optional (k, n) array with k <= m, seeds restart 0 by fixing its first k
    columns to the given states.
    """
    cfg = cfg or SearchConfig()
    n = graph.rows
    if not 2 <= m <= n:
        raise PreconditionError(f"codebook size {m} outside 2..{n}")
    pen = _Penalty(graph.basis, n, m)
    best = np.inf
    for r in range(cfg.restarts):
        rng = restart_rng(cfg.seed, r)
        v = np.array([random_unit(rng, n) for _ in range(m)]).T
        if r == 0 and start is not None:
            start = np.atleast_2d(start)
            v[:, : start.shape[0]] = start.T
        x0 = np.concatenate([v.real.ravel(), v.imag.ravel()])
        x, penalty = _levenberg_marquardt(pen.residuals, pen.jacobian, x0, cfg.max_iters)
        best = min(best, penalty)
        if penalty < SUCCESS_PENALTY:
            book = make_codebook(graph, _polish(pen._unpack(x)).T)
            if book.valid:
                return CodebookSearch(m, penalty, r + 1, cfg.seed, book)
    return CodebookSearch(m, best, cfg.restarts, cfg.seed)


def _standard_basis_codebook(graph):
    book = make_codebook(graph, np.eye(graph.rows))
    return book if book.valid else None


def alpha_lower(graph, cfg=None, warm_start=None):
    """Largest codebook found by growing m from 2 until the search fails.

    ``warm_start`` is a codebook already known to be valid for ``graph``
    (for instance a product codebook); if it verifies, the search resumes
    above its size.
    """
    cfg = cfg or SearchConfig()
    n = graph.rows
    if complement(graph).dim == 0:
        return CapacityReport(1, "trivial", alpha_exact=1, codebook=make_codebook(graph, np.eye(n)[:1]),
                              notes=["graph is all of L(C^n)"])
    std = _standard_basis_codebook(graph)
    if std is not None:
        note = "diagonal algebra span{|t><t|}" if is_diagonal_algebra(graph) else \
            "computational basis is a codebook"
        return CapacityReport(n, "trivial", alpha_exact=n, codebook=std, notes=[note])

    best = make_codebook(graph, np.eye(n)[:1])
    method = "search"
    evidence = None
    if warm_start is not None:
        book = make_codebook(graph, warm_start.vectors)
        if book.valid and len(book) > 1:
            best = book
    if len(best) == 1:
        evidence = capacity_is_zero(graph, cfg)
        if evidence.status == "certified_positive":
            cert = evidence.search.certificate
            book = make_codebook(graph, np.array([cert.left, cert.right]))
            if book.valid:
                best, method = book, "rank_one_certified"
    failed = None
    for m in range(len(best) + 1, n + 1):
        res = codebook_search(graph, m, cfg, start=best.vectors if len(best) > 1 else None)
        if not res.success:
            failed = res
            break
        best, method = res.codebook, "search"
    exact = n if len(best) == n else None
    return CapacityReport(len(best), method, alpha_exact=exact, codebook=best,
                          failed_search=failed, zero_evidence=evidence)


QUBIT_ALPHA = {1: 2, 2: 2, 3: 1, 4: 1}


def alpha_exact_qubit(graph):
    """Exact alpha for a qubit graph from its dimension alone.

    Up to unitary equivalence the qubit graphs are CI, span{I,Z},
    span{I,X,Z} and L(C^2), with alpha 2, 2, 1, 1.
    """
    if graph.rows != 2 or graph.cols != 2:
        raise PreconditionError("alpha_exact_qubit needs a graph on C^2")
    alpha = QUBIT_ALPHA[graph.dim]
    if graph.dim == 1:
        vectors = np.eye(2)
    elif graph.dim == 2:
        # eigenvectors of the Hermitian direction orthogonal to I separate the two codewords
        b = complement_of_identity(graph)
        h = b + dagger(b)
        if np.linalg.norm(h) < 1e-8:
            h = 1j * (b - dagger(b))
        vectors = np.linalg.eigh(h)[1].T
    else:
        vectors = np.eye(2)[:1]
    return CapacityReport(alpha, "qubit_exact", alpha_exact=alpha, codebook=make_codebook(graph, vectors),
                          notes=["C0 = C0^(1) for qubit graphs is assumed from prior work, not verified"])


def complement_of_identity(graph):
    """A unit element of ``graph`` orthogonal to the identity."""
    ident = np.eye(graph.rows) / np.sqrt(graph.rows)
    for b in graph.basis:
        r = b - np.vdot(ident, b) * ident
        if np.linalg.norm(r) > 1e-8:
            return r / np.linalg.norm(r)
    raise PreconditionError("graph is spanned by the identity")


def capacity(graph, cfg=None):
    """Best available report: exact for qubits, search otherwise."""
    if graph.rows == 2:
        return alpha_exact_qubit(graph)
    return alpha_lower(graph, cfg)


def tensor_power_lower(graph, k, cfg=None, cap=None):
    """alpha lower bound for the k-fold tensor power, with bits also given per use."""
    cfg = cfg or SearchConfig()
    power = NoncommGraph.from_subspace(tensor_power(graph, k, cap))
    if is_diagonal_algebra(power):
        n = power.rows
        return CapacityReport(n, "trivial", alpha_exact=n, codebook=make_codebook(power, np.eye(n)),
                              power=k, notes=["recognized as span{|t><t|}; alpha exact without search"])
    warm = None
    if k > 1:
        base = capacity(graph, cfg)
        if base.codebook is not None and len(base.codebook) > 1:
            warm = base.codebook
            for _ in range(k - 1):
                warm = product_codebook(warm, base.codebook)
    rep = alpha_lower(power, cfg, warm_start=warm)
    rep.power = k
    rep.notes.append("finite-k lower bound only; the k -> infinity limit is not computed")
    return rep
