import numpy as np
import pytest
import sympy

from zequa.activation import family_graph
from zequa.subspaces import full_graph, identity_graph, pauli_graph


def exact_rank(mats):
    """Rank of the vectorized matrices by exact rational elimination."""
    def exact(x):
        return sympy.nsimplify(float(x), rational=True, tolerance=1e-12)

    rows = [[exact(z.real) + sympy.I * exact(z.imag) for z in np.asarray(m, dtype=complex).ravel()]
            for m in mats]
    return sympy.Matrix(rows).rank()


def kron_loop(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


@pytest.fixture(scope="session")
def qubits():
    return {
        "CI": identity_graph(2),
        "IZ": pauli_graph("I-Z"),
        "IXZ": pauli_graph("I-X-Z"),
        "L2": full_graph(2),
    }


@pytest.fixture(scope="session")
def T3():
    return family_graph(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
