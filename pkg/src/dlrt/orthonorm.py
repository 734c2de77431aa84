"""Block orthonormalization built on matrix products.

Basis augmentation repeatedly extends an already-orthonormal block Q by new
columns M.  A Householder QR of [M, Q] would do, but it runs far slower than
level-3 BLAS on tall matrices; instead we project M twice against Q, then
orthonormalize the remainder through its Gram matrix (eigendecomposition
plus one Cholesky refinement pass).  Numerically null remainder directions
are dropped: every projection downstream only uses the spanned subspace, so
a smaller basis represents the same solution.
"""

import numpy as np


def orthonormal_complement(
    Q: np.ndarray,
    M: np.ndarray,
    drop_tol: float = 1e-7,
    floor_tol: float = 1e-12,
) -> np.ndarray | None:
    """Orthonormal block B spanning the part of range(M) outside range(Q).

    Q must have orthonormal columns.  Remainder directions with singular
    value below ``drop_tol`` relative to the largest remainder direction, or
    below ``floor_tol`` relative to the scale of M, are dropped (None when
    nothing survives).  drop_tol bounds the condition number of the kept
    block, which the single refinement pass needs to reach machine-precision
    orthogonality.
    """
    if M.ndim == 1:
        M = M[:, None]
    if M.shape[1] == 0:
        return None
    scale = np.linalg.norm(M)
    if not np.isfinite(scale) or scale == 0.0:
        return None
    has_q = Q.shape[1] > 0
    if has_q:
        M = M - Q @ (Q.T @ M)
        M = M - Q @ (Q.T @ M)

    lam, W = np.linalg.eigh(M.T @ M)
    floor = max((drop_tol**2) * lam[-1], (floor_tol * scale) ** 2)
    keep = lam > floor
    if not np.any(keep):
        return None
    B = M @ (W[:, keep] / np.sqrt(lam[keep]))

    # One refinement pass restores machine-precision orthogonality; the
    # Cholesky factor of the Gram matrix is near-identity, so the explicit
    # small inverse is safe and keeps everything in matrix products.
    if has_q:
        B = B - Q @ (Q.T @ B)
    L = np.linalg.cholesky(B.T @ B)
    return B @ np.linalg.inv(L).T


def append_orthonormal(
    Q: np.ndarray,
    M: np.ndarray,
    drop_tol: float = 1e-7,
    floor_tol: float = 1e-12,
) -> np.ndarray:
    """Orthonormal basis of range(Q) + range(M) of the form [Q, B]."""
    B = orthonormal_complement(Q, M, drop_tol, floor_tol)
    if B is None:
        return Q
    return np.hstack([Q, B]) if Q.shape[1] else B
