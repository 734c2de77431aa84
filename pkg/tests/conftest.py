import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_orthonormal(rng, n, k):
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return q


def dense_transport(u, stencils, flux):
    """Reference streaming term, assembled with dense matrices only."""
    out = np.zeros_like(u)
    for st, fl in zip(stencils, flux):
        dx = st.Dx.toarray()
        dxx = st.Dxx.toarray()
        out = out - dx @ u @ fl.A.T + dxx @ u @ fl.A_abs.T
    return out
