"""Operator subspaces and noncommutative graphs.

A subspace of L(C^cols, C^rows) is stored as a Hilbert-Schmidt orthonormal
basis, an array of shape ``(dim, rows, cols)``.
"""

import os
from dataclasses import dataclass

import numpy as np

from .errors import ChannelError, DimensionError, PreconditionError, SizeError
from .linalg import I2, SX, SY, SZ, as_matrix, dagger, orthonormalize

DEFAULT_MAX_DIM = 64
GRAPH_TOL = 1e-10
KRAUS_TOL = 1e-10


def max_dim():
    """Ambient dimension cap; the ZEQUA_MAX_DIM environment variable overrides it."""
    value = os.environ.get("ZEQUA_MAX_DIM")
    return int(value) if value else DEFAULT_MAX_DIM


class OperatorSubspace:
    def __init__(self, basis, rows, cols):
        basis = np.asarray(basis, dtype=complex).reshape(-1, rows, cols)
        basis.setflags(write=False)
        self.basis = basis
        self.rows = rows
        self.cols = cols

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def ambient_dim(self):
        return self.rows * self.cols

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return f"<{type(self).__name__} dim={self.dim} in L({self.rows}x{self.cols})>"

    def _flat(self):
        return self.basis.reshape(self.dim, self.rows * self.cols)

    def coefficients(self, m):
        """HS coordinates <B_k, M> of the orthogonal projection of ``m``."""
        m = np.asarray(m, dtype=complex)
        if m.shape != self.shape:
            raise DimensionError(f"expected shape {self.shape}, got {m.shape}")
        return self._flat().conj() @ m.reshape(-1)

    def combine(self, coeffs):
        return np.tensordot(np.asarray(coeffs, dtype=complex), self.basis, axes=1)

    def project(self, m):
        if self.dim == 0:
            return np.zeros(self.shape, dtype=complex)
        return self.combine(self.coefficients(m))

    def residual(self, m):
        """Frobenius norm of the part of ``m`` orthogonal to this subspace."""
        m = np.asarray(m, dtype=complex)
        return float(np.linalg.norm(m - self.project(m)))

    def projector(self):
        """Orthogonal projector on the row-major vectorization, ambient x ambient."""
        v = self._flat().T
        return v @ v.conj().T

    def same_span(self, other, tol=1e-9):
        if self.shape != other.shape:
            return False
        return bool(np.linalg.norm(self.projector() - other.projector()) < tol)


class NoncommGraph(OperatorSubspace):
    """An operator subspace S of L(C^n) with S = S^dag and I in S."""

    def __init__(self, basis, n):
        super().__init__(basis, n, n)
        check = is_noncomm_graph(self)
        if not check:
            raise PreconditionError(f"not a noncommutative graph: {check.diagnostic}")

    @property
    def n(self):
        return self.rows

    @classmethod
    def from_subspace(cls, space):
        if space.rows != space.cols:
            raise DimensionError("noncommutative graphs need a square ambient space")
        if isinstance(space, cls):
            return space
        return cls(space.basis, space.rows)


@dataclass(frozen=True)
class GraphCheck:
    dagger_residual: float
    identity_residual: float
    tol: float = GRAPH_TOL

    @property
    def dagger_closed(self):
        return self.dagger_residual < self.tol

    @property
    def has_identity(self):
        return self.identity_residual < self.tol

    @property
    def ok(self):
        return self.dagger_closed and self.has_identity

    def __bool__(self):
        return self.ok

    @property
    def diagnostic(self):
        problems = []
        if not self.dagger_closed:
            problems.append(f"not closed under adjoint (residual {self.dagger_residual:.3e})")
        if not self.has_identity:
            problems.append(f"identity not contained (residual {self.identity_residual:.3e})")
        return "; ".join(problems) or "ok"


@dataclass(frozen=True)
class KrausChannel:
    kraus: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        n = ops[0].shape[0]
        for k in ops:
            if k.shape != (n, n):
                raise DimensionError("Kraus operators must all be n x n")
        total = sum(dagger(k) @ k for k in ops)
        err = np.linalg.norm(total - np.eye(n))
        if err > KRAUS_TOL:
            raise ChannelError(f"Kraus operators are not complete: |sum E^dag E - I| = {err:.3e}")
        object.__setattr__(self, "kraus", ops)

    @property
    def n(self):
        return self.kraus[0].shape[0]


def from_spanning(mats, tol=1e-10):
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        raise DimensionError("from_spanning needs at least one matrix")
    shape = mats[0].shape
    if len(shape) != 2 or any(m.shape != shape for m in mats):
        raise DimensionError("spanning matrices must share one 2-D shape")
    return OperatorSubspace(orthonormalize(mats, tol), *shape)


def from_kraus(channel):
    """Noncommutative graph span{E_i^dag E_j} of a channel."""
    if not isinstance(channel, KrausChannel):
        channel = KrausChannel(tuple(channel))
    prods = [dagger(a) @ b for a in channel.kraus for b in channel.kraus]
    return NoncommGraph.from_subspace(from_spanning(prods))


def zero_space(rows, cols):
    return OperatorSubspace(np.zeros((0, rows, cols), dtype=complex), rows, cols)


def complement(space):
    n = space.ambient_dim
    if space.dim == 0:
        basis = np.eye(n, dtype=complex)
    else:
        u, s, _ = np.linalg.svd(space._flat().T, full_matrices=True)
        rank = int(np.sum(s > 0.5))  # basis is orthonormal, so s == 1
        basis = u[:, rank:].T
    return OperatorSubspace(basis, space.rows, space.cols)


def tensor(s, t, cap=None):
    cap = max_dim() if cap is None else cap
    rows, cols = s.rows * t.rows, s.cols * t.cols
    if max(rows, cols) > cap:
        raise SizeError(f"tensor product ambient {rows}x{cols} exceeds cap {cap}")
    basis = np.einsum("aij,bkl->abikjl", s.basis, t.basis).reshape(-1, rows, cols)
    out = OperatorSubspace(basis, rows, cols)
    if isinstance(s, NoncommGraph) and isinstance(t, NoncommGraph):
        return NoncommGraph(basis, rows)
    return out


def tensor_power(s, k, cap=None):
    if k < 1:
        raise PreconditionError("tensor power needs k >= 1")
    out = s
    for _ in range(k - 1):
        out = tensor(out, s, cap)
    return out


def contains(space, m, tol=GRAPH_TOL):
    m = np.asarray(m, dtype=complex)
    if m.shape != space.shape:
        raise DimensionError(f"expected shape {space.shape}, got {m.shape}")
    return space.residual(m) < tol * max(1.0, float(np.linalg.norm(m)))


def is_noncomm_graph(space, tol=GRAPH_TOL):
    if space.rows != space.cols:
        raise DimensionError("noncommutative graphs need a square ambient space")
    dag = max((space.residual(dagger(b)) for b in space.basis), default=0.0)
    n = space.rows
    ident = space.residual(np.eye(n) / np.sqrt(n))
    return GraphCheck(dag, ident, tol)


def conjugate(space):
    out = np.conj(space.basis)
    if isinstance(space, NoncommGraph):
        return NoncommGraph(out, space.n)
    return OperatorSubspace(out, space.rows, space.cols)


def is_diagonal_algebra(space, tol=GRAPH_TOL):
    """True when ``space`` is exactly span{|t><t|} on its square ambient."""
    if space.rows != space.cols or space.dim != space.rows:
        return False
    off = space.basis * (1 - np.eye(space.rows))
    return bool(np.all(np.abs(off) < tol))


# canonical graphs

def identity_graph(n=2):
    return NoncommGraph(np.eye(n)[None] / np.sqrt(n), n)


def full_graph(n):
    return NoncommGraph(np.eye(n * n).reshape(n * n, n, n), n)


def pauli_graph(name):
    """Qubit graphs by Pauli content: ``I2``, ``I-Z``, ``I-X-Z``, ``I-X-Y-Z``."""
    table = {"I": I2, "X": SX, "Y": SY, "Z": SZ}
    labels = ["I"] if name == "I2" else name.split("-")
    if not labels or any(lab not in table for lab in labels):
        raise ValueError(f"unknown Pauli graph {name!r}")
    return NoncommGraph.from_subspace(from_spanning([table[lab] for lab in labels]))


def dephasing_channel(p):
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"dephasing probability {p} outside [0, 1]")
    return KrausChannel((np.sqrt(1 - p) * I2, np.sqrt(p) * SY))


def dephasing_graph(p):
    return from_kraus(dephasing_channel(p))


def qubit_graphs():
    """The four qubit graph classes: CI, span{I,Z}, span{I,X,Z}, L(C^2)."""
    return {
        "pauli:I2": identity_graph(2),
        "pauli:I-Z": pauli_graph("I-Z"),
        "pauli:I-X-Z": pauli_graph("I-X-Z"),
        "full:2": full_graph(2),
    }


def random_subspace(rows, cols, dim, rng):
    mats = rng.standard_normal((dim, rows, cols)) + 1j * rng.standard_normal((dim, rows, cols))
    if dim == 0:
        return zero_space(rows, cols)
    return from_spanning(list(mats))


def random_graph(n, extra, rng):
    """span{I, H_1, ..., H_extra} with random Hermitian H_k."""
    mats = [np.eye(n, dtype=complex)]
    for _ in range(extra):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        mats.append(g + dagger(g))
    return NoncommGraph.from_subspace(from_spanning(mats))
