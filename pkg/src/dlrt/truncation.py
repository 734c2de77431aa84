"""Rank truncation strategies.

``truncate_standard`` is the usual SVD tail cut.  ``truncate_conservative``
splits off the zeroth-moment (mass-carrying) column before truncating, so
the scalar flux of the represented solution is preserved to rounding; only
the non-isotropic remainder is compressed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import RankOverflowError
from .lowrank import LowRankState, complete_basis


@dataclass(frozen=True)
class TruncationConfig:
    """Tail tolerance and rank bounds.

    The tolerance is theta = theta_rel * ||Sigma||_2 (largest singular value
    of the matrix being truncated) unless ``absolute`` is set, in which case
    theta_rel is taken as the absolute tolerance.
    """

    theta_rel: float = 0.1
    r_min: int = 1
    r_max: int = 100
    absolute: bool = False

    def __post_init__(self):
        if self.theta_rel < 0:
            raise ValueError("theta_rel must be >= 0")
        if not 1 <= self.r_min <= self.r_max:
            raise ValueError("need 1 <= r_min <= r_max")

    def theta(self, svals: np.ndarray) -> float:
        if self.absolute or svals.size == 0:
            return self.theta_rel
        return self.theta_rel * float(svals[0])


def _tail_rank(svals: np.ndarray, theta: float, r_lo: int, r_hi: int) -> int:
    """Minimal r with ||(sigma_j)_{j>r}||_2 <= theta, clamped to [r_lo, r_hi].

    Raises RankOverflowError when even r_hi cannot meet the tolerance.
    """
    n = svals.size
    tail = np.sqrt(np.cumsum((svals**2)[::-1]))[::-1]  # tail[k] = ||svals[k:]||
    r = n
    for k in range(n + 1):
        if k == n or tail[k] <= theta:
            r = k
            break
    r_hi = min(r_hi, n)
    if r > r_hi:
        raise RankOverflowError(
            f"truncation tail {tail[r_hi] if r_hi < n else 0.0:.3e} exceeds "
            f"tolerance {theta:.3e} at the rank cap {r_hi}; increase the "
            f"tolerance or the rank cap"
        )
    return max(r, min(r_lo, n))


def truncate_standard(
    X: np.ndarray, S: np.ndarray, V: np.ndarray, cfg: TruncationConfig, t: float = 0.0
) -> LowRankState:
    """SVD tail truncation of the coefficient matrix, bases rotated along."""
    P, svals, Qt = np.linalg.svd(S)
    r1 = _tail_rank(svals, cfg.theta(svals), cfg.r_min, cfg.r_max)
    r1 = max(r1, 1)
    return LowRankState(
        X @ P[:, :r1], np.diag(svals[:r1]), V @ Qt[:r1, :].T, t
    )


def truncate_conservative(
    X: np.ndarray, S: np.ndarray, V: np.ndarray, cfg: TruncationConfig, t: float = 0.0
) -> LowRankState:
    """Truncation that preserves the zeroth-moment column exactly.

    Requires V's first column to be the moment-space unit vector e_1 (the
    basis augmentation in the stable step guarantees this).  The conserved
    column of X S is split off and renormalized; the remaining columns are
    compressed by the standard tail criterion; finally both parts are merged
    and re-orthonormalized, with the mixing factors folded back into the
    coefficient matrix so the represented solution is untouched.
    """
    e1_defect = V[:, 0].copy()
    e1_defect[0] -= 1.0
    if np.max(np.abs(e1_defect)) > 1e-8:
        raise ValueError("conservative truncation requires V[:, 0] == e_1")

    k_cons = X @ S[:, 0]
    s_cons = float(np.linalg.norm(k_cons))
    if s_cons > 0.0:
        x_cons = k_cons / s_cons
    else:
        # Zero conserved column: any unit vector paired with a zero weight
        # leaves the represented solution unchanged.
        x_cons = np.zeros(X.shape[0])
        x_cons[0] = 1.0

    # QR of the remainder K[:, 1:] = X S[:, 1:], factored through the
    # orthonormal X: qr(S[:, 1:]) carries the whole factorization.
    Q_rem, S_rem_hat = np.linalg.qr(S[:, 1:])
    U, svals, Wt = np.linalg.svd(S_rem_hat)
    r_rem = _tail_rank(svals, cfg.theta(svals), max(cfg.r_min - 1, 0), cfg.r_max - 1)
    X_rem = X @ (Q_rem @ U[:, :r_rem])
    V_rem = V[:, 1:] @ Wt[:r_rem, :].T

    # Merge [x_cons, X_rem] by appending the conserved direction to the
    # orthonormal remainder; the factor R1 with [x_cons, X_rem] = X1 R1
    # follows from the Gram-Schmidt coefficients.  Three projection passes
    # keep the appended column orthogonal even when x_cons lies almost
    # inside the remainder span.
    v = X_rem.T @ x_cons
    w = x_cons - X_rem @ v
    for _ in range(2):
        dv = X_rem.T @ w
        v += dv
        w -= X_rem @ dv
    rho = float(np.linalg.norm(w))
    if rho > 1e-13:
        x_first = w / rho
    else:
        x_first = complete_basis(X_rem, 1)[:, -1]
        rho = float(x_first @ x_cons)
    X1 = np.column_stack([x_first, X_rem])
    R1 = np.zeros((1 + r_rem, 1 + r_rem))
    R1[0, 0] = rho
    R1[1:, 0] = v
    R1[1:, 1:] = np.eye(r_rem)

    e1 = np.zeros(V.shape[0])
    e1[0] = 1.0
    V1, R2 = np.linalg.qr(np.column_stack([e1, V_rem]))
    core = np.zeros((1 + r_rem, 1 + r_rem))
    core[0, 0] = s_cons
    core[1:, 1:] = np.diag(svals[:r_rem])
    return LowRankState(X1, R1 @ core @ R2.T, V1, t)
