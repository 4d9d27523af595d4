"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; states are
1-D arrays of unit Euclidean norm. Vectorization is row-major throughout
(``vec(A)[i*cols + j] == A[i, j]``), which is what ``ndarray.reshape``
does by default.
"""

import numpy as np

from .errors import DimensionError, NumericError, SizeError

KRON_MAX_DIM = 4096
ABS_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(a):
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionError(f"expected a nonempty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError("matrix has non-finite entries")
    return m


def dagger(a):
    return np.conj(np.transpose(a))


def ket(i, dim):
    v = np.zeros(dim, dtype=complex)
    v[i] = 1.0
    return v


def matrix_unit(i, j, rows, cols=None):
    """|i><j| as a rows x cols matrix."""
    e = np.zeros((rows, rows if cols is None else cols), dtype=complex)
    e[i, j] = 1.0
    return e


def normalize(v):
    v = np.asarray(v, dtype=complex).ravel()
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n <= ABS_TOL:
        raise NumericError("cannot normalize a (near-)zero vector")
    return v / n


def vec(a):
    return np.asarray(a).reshape(-1)


def unvec(v, rows, cols):
    return np.asarray(v).reshape(rows, cols)


def hs_inner(a, b):
    """Hilbert-Schmidt inner product Tr[A^dag B]."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def kron(a, b, max_dim=KRON_MAX_DIM):
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise SizeError(f"kron result {rows}x{cols} exceeds cap {max_dim}")
    return np.kron(a, b)


def singular_values(a):
    """All min(rows, cols) singular values, descending."""
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def orthonormalize(mats, tol=1e-10):
    """Hilbert-Schmidt orthonormal basis for the span of ``mats``.

    Gram-Schmidt with every projection applied twice. An input is dropped
    when its residual falls below ``tol * max_input_norm`` (floored at
    1e-12).
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        return []
    shape = mats[0].shape
    for m in mats:
        if m.shape != shape:
            raise DimensionError(f"shape mismatch {shape} vs {m.shape}")
    scale = max(np.linalg.norm(m) for m in mats)
    cutoff = max(tol * scale, ABS_TOL)
    basis = []
    for m in mats:
        r = m.copy()
        for _ in range(2):
            for q in basis:
                r = r - np.vdot(q, r) * q
        nr = np.linalg.norm(r)
        if nr >= cutoff:
            basis.append(r / nr)
    return basis


def gram(mats):
    """Matrix of pairwise HS inner products <M_i, M_j>."""
    if len(mats) == 0:
        return np.zeros((0, 0), dtype=complex)
    flat = np.array([vec(m) for m in mats])
    return flat.conj() @ flat.T
