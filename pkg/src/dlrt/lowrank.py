"""Low-rank factored moment states X S V^T and factorization helpers."""

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class LowRankState:
    """Moment solution u ~= X S V^T with orthonormal basis factors.

    X: (n_cells, r) spatial basis, V: (n_moments, r) directional basis,
    S: (r, r) coefficient matrix.  S may be rectangular transiently inside a
    step; states returned by public operations carry square S.
    """

    X: np.ndarray
    S: np.ndarray
    V: np.ndarray
    t: float = 0.0

    @property
    def rank(self) -> int:
        return self.X.shape[1]

    @property
    def n_cells(self) -> int:
        return self.X.shape[0]

    @property
    def n_moments(self) -> int:
        return self.V.shape[0]

    def densify(self) -> np.ndarray:
        """Dense (n_cells, n_moments) moment matrix."""
        return self.X @ self.S @ self.V.T

    def zeroth_moment(self) -> np.ndarray:
        """Column 0 of the dense solution (the scalar-flux coefficient)."""
        return self.X @ (self.S @ self.V[0, :])

    def at_time(self, t: float) -> "LowRankState":
        return replace(self, t=t)


def orthonormality_defect(Q: np.ndarray) -> float:
    """max-norm deviation of Q^T Q from the identity."""
    r = Q.shape[1]
    if r == 0:
        return 0.0
    return float(np.max(np.abs(Q.T @ Q - np.eye(r))))


def complete_basis(Q: np.ndarray, n_extra: int) -> np.ndarray:
    """Append ``n_extra`` orthonormal columns to Q (deterministically).

    Candidates are canonical basis vectors, orthogonalized twice against the
    accumulated basis; candidates that are numerically dependent get skipped.
    """
    n, r = Q.shape
    if r + n_extra > n:
        raise ValueError(f"cannot extend {r} columns by {n_extra} in dimension {n}")
    cols = [Q]
    have = r
    basis = Q
    for i in range(n):
        if have >= r + n_extra:
            break
        v = np.zeros(n)
        v[i] = 1.0
        for _ in range(2):
            v -= basis @ (basis.T @ v)
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            v /= nrm
            cols.append(v[:, None])
            basis = np.hstack(cols)
            have += 1
    if have < r + n_extra:
        raise RuntimeError("orthonormal completion failed")
    return basis


def factorize_moments(u: np.ndarray, r: int, t: float = 0.0) -> LowRankState:
    """SVD-factorize a dense moment matrix and pad to rank ``r``.

    Unused directions are filled with orthonormal completion columns and
    zero singular values, so the represented solution equals ``u`` exactly
    (up to floating-point rounding) whenever rank(u) <= r.
    """
    n_cells, n_moments = u.shape
    if not 1 <= r <= min(n_cells, n_moments):
        raise ValueError(
            f"rank {r} out of range for a {n_cells}x{n_moments} moment matrix"
        )
    P, svals, Qt = np.linalg.svd(u, full_matrices=False)
    keep = min(r, svals.size)
    X = P[:, :keep]
    V = Qt[:keep, :].T
    S = np.diag(svals[:keep])
    if keep < r:
        X = complete_basis(X, r - keep)
        V = complete_basis(V, r - keep)
        S_pad = np.zeros((r, r))
        S_pad[:keep, :keep] = S
        S = S_pad
    return LowRankState(X, S, V, t)


def lowrank_from_factors(
    spatial: np.ndarray, angular: np.ndarray, r: int, t: float = 0.0
) -> LowRankState:
    """Low-rank state for u = spatial @ angular^T, padded to rank ``r``.

    ``spatial`` is (n_cells, k) and ``angular`` (n_moments, k) with small k;
    avoids densifying the full moment matrix for separable initial data.
    """
    qx, rx = np.linalg.qr(spatial)
    qv, rv = np.linalg.qr(angular)
    core = rx @ rv.T
    P, svals, Qt = np.linalg.svd(core)
    inner = LowRankState(qx @ P, np.diag(svals), qv @ Qt.T, t)
    keep = svals.size
    if keep >= r:
        return inner
    X = complete_basis(inner.X, r - keep)
    V = complete_basis(inner.V, r - keep)
    S = np.zeros((r, r))
    S[:keep, :keep] = inner.S
    return LowRankState(X, S, V, t)
