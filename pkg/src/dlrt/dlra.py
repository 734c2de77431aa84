"""Energy-stable rank-adaptive basis-update and Galerkin stepper.

One step runs the pipeline

    K-step / L-step  ->  basis augmentation  ->  Galerkin S-step
    ->  coupled zeroth-moment / internal-energy solve
    ->  absorption update on the non-isotropic moments
    ->  flux-preserving basis augmentation and coefficient correction
    ->  rank truncation (conservative by default).

Transport is treated explicitly in the K/L/S substeps (no opacity there);
the opacity couples the zeroth moment and the internal energy implicitly,
which is what keeps the total energy non-increasing for dt <= dx.  The
zeroth-moment column of the updated solution is written exactly by the final
augmentation, so conservative truncation can keep mass exact per cell.

Augmented bases are built as [old block, orthonormal complement of the
update]; the old factors enter verbatim, so the projected coefficient
matrices are exact block embeddings rather than numerically formed products.
"""

import numpy as np

from .errors import RankOverflowError
from .full_solver import absorption_emission_solve
from .lowrank import LowRankState
from .ops import as_dims, check_finite, min_dx
from .orthonorm import orthonormal_complement
from .truncation import TruncationConfig, truncate_conservative, truncate_standard


def k_step(state: LowRankState, stencils, flux, dt: float) -> np.ndarray:
    """Explicit transport update of K = X S against the frozen V basis."""
    stencils, flux = as_dims(stencils, flux)
    K = state.X @ state.S
    out = K.copy()
    for st, fl in zip(stencils, flux):
        W_a = state.V.T @ (fl.A @ state.V)
        W_abs = state.V.T @ (fl.A_abs @ state.V)
        out -= dt * ((st.Dx @ K) @ W_a.T)
        out += dt * ((st.Dxx @ K) @ W_abs.T)
    return out


def l_step(state: LowRankState, stencils, flux, dt: float) -> np.ndarray:
    """Explicit transport update of L = V S^T against the frozen X basis."""
    stencils, flux = as_dims(stencils, flux)
    L = state.V @ state.S.T
    out = L.copy()
    for st, fl in zip(stencils, flux):
        M = state.X.T @ (st.Dx @ state.X)
        N = state.X.T @ (st.Dxx @ state.X)
        out -= dt * (fl.A @ (L @ M.T))
        out += dt * (fl.A_abs @ (L @ N.T))
    return out


def augment_and_project(
    k_new: np.ndarray, l_new: np.ndarray, state: LowRankState
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Augment the updated bases with the old ones and project the old S.

    Returns (X_star, V_star, S0_tilde) with orthonormal bases whose ranges
    contain the old factors and the K/L updates.  The old bases occupy the
    leading columns verbatim, so the projection of the old coefficients is
    the exact block embedding S0_tilde = [[S0, 0], [0, 0]] and the augmented
    triple reproduces the old solution without rounding.  Update directions
    already represented (or numerically negligible) are dropped, capping the
    augmented rank at twice the old one.
    """
    bx = orthonormal_complement(state.X, k_new)
    bv = orthonormal_complement(state.V, l_new)
    X_star = state.X if bx is None else np.hstack([state.X, bx])
    V_star = state.V if bv is None else np.hstack([state.V, bv])
    S0_tilde = np.zeros((X_star.shape[1], V_star.shape[1]))
    S0_tilde[: state.S.shape[0], : state.S.shape[1]] = state.S
    return X_star, V_star, S0_tilde


def s_step(
    X_star: np.ndarray,
    V_star: np.ndarray,
    S0_tilde: np.ndarray,
    stencils,
    flux,
    dt: float,
) -> np.ndarray:
    """Galerkin transport update of the coefficients in the augmented space."""
    stencils, flux = as_dims(stencils, flux)
    out = S0_tilde.copy()
    for st, fl in zip(stencils, flux):
        M = X_star.T @ (st.Dx @ X_star)
        N = X_star.T @ (st.Dxx @ X_star)
        W_a = V_star.T @ (fl.A @ V_star)
        W_abs = V_star.T @ (fl.A_abs @ V_star)
        out -= dt * (M @ S0_tilde @ W_a.T)
        out += dt * (N @ S0_tilde @ W_abs.T)
    return out


def coupled_zeroth_update(
    state: LowRankState,
    B: np.ndarray,
    stencils,
    flux,
    sigma: float,
    dt: float,
    source: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Implicitly coupled update of the zeroth moment and the internal energy.

    The explicit part is the exact (unprojected) transport of the zeroth
    moment; since the augmented bases reproduce the old solution without
    error, the streaming column is contracted through the old factors
    directly.  The opacity coupling is solved in closed form per cell.
    Returns (u0_hat, B_new).
    """
    stencils, flux = as_dims(stencils, flux)
    c = state.X @ (state.S @ state.V[0, :])
    for st, fl in zip(stencils, flux):
        w_a = state.S @ (state.V.T @ fl.A[:, 0])
        w_abs = state.S @ (state.V.T @ fl.A_abs[:, 0])
        c -= dt * (st.Dx @ (state.X @ w_a))
        c += dt * (st.Dxx @ (state.X @ w_abs))
    if source is not None:
        c = c + dt * source
    return absorption_emission_solve(c, B, sigma, dt)


def absorption_update(
    S_star: np.ndarray, V_star: np.ndarray, sigma: float, dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """Implicit opacity damping of the non-isotropic moments.

    Scales the moment rows m != 0 of L = V* S*^T by 1/(1 + sigma dt) (the
    zeroth row is replaced downstream by the coupled update) and refactorizes
    by QR.  Returns (V_scat, S_scat) with L_scat = V_scat S_scat^T.
    """
    L = V_star @ S_star.T
    L[1:, :] /= 1.0 + sigma * dt
    V_scat, R = np.linalg.qr(L)
    return V_scat, R.T


def flux_augment_and_correct(
    u0_hat: np.ndarray,
    X_star: np.ndarray,
    V_scat: np.ndarray,
    S_scat: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Augment the bases with the updated flux and correct the coefficients.

    The assembled solution X1~ S1~ V1~^T carries exactly ``u0_hat`` in its
    zeroth-moment column; the other columns hold the absorption-updated
    solution with its zeroth-moment component projected out.  V1~'s first
    column is e_1 exactly, which conservative truncation relies on.
    """
    n_moments = V_scat.shape[0]
    e1_col = np.zeros((n_moments, 1))
    e1_col[0, 0] = 1.0
    # The flux direction must survive down to rounding level, or mass leaks.
    bx = orthonormal_complement(X_star, u0_hat, drop_tol=1e-14, floor_tol=1e-15)
    X1 = X_star if bx is None else np.hstack([X_star, bx])
    bv = orthonormal_complement(e1_col, V_scat)
    V1 = e1_col if bv is None else np.hstack([e1_col, bv])

    # S1 = X1^T X* S_scat V_scat^T (I - e1 e1^T) V1 + (X1^T u0_hat) e1^T V1,
    # where X1^T X* = [I; 0] exactly by the block construction.
    V_zeroed = V1.copy()
    V_zeroed[0, :] = 0.0
    core = S_scat @ (V_scat.T @ V_zeroed)
    S1 = np.zeros((X1.shape[1], V1.shape[1]))
    S1[: core.shape[0], :] = core
    S1 += np.outer(X1.T @ u0_hat, V1[0, :])
    return X1, S1, V1


def dlra_step(
    state: LowRankState,
    B: np.ndarray,
    stencils,
    flux,
    sigma: float,
    dt: float,
    trunc: TruncationConfig,
    source: np.ndarray | None = None,
    conservative: bool = True,
    allow_large_dt: bool = False,
    step: int | None = None,
) -> tuple[LowRankState, np.ndarray]:
    """One step of the energy-stable scheme; returns the truncated state and
    the updated internal energy.

    Refuses dt > dx (the energy estimate's hypothesis) unless
    ``allow_large_dt`` is set.
    """
    stencils, flux = as_dims(stencils, flux)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not allow_large_dt and dt > min_dx(stencils) * (1.0 + 1e-12):
        raise ValueError(
            f"dt = {dt:g} violates the stability restriction dt <= dx = "
            f"{min_dx(stencils):g}; pass allow_large_dt=True to override"
        )

    k_new = k_step(state, stencils, flux, dt)
    l_new = l_step(state, stencils, flux, dt)
    X_star, V_star, S0_tilde = augment_and_project(k_new, l_new, state)
    S_star = s_step(X_star, V_star, S0_tilde, stencils, flux, dt)
    u0_hat, B_new = coupled_zeroth_update(state, B, stencils, flux, sigma, dt, source)
    V_scat, S_scat = absorption_update(S_star, V_star, sigma, dt)
    X1, S1, V1 = flux_augment_and_correct(u0_hat, X_star, V_scat, S_scat)
    check_finite(S1, "coefficient matrix", step)
    check_finite(B_new, "internal energy", step)

    truncate = truncate_conservative if conservative else truncate_standard
    try:
        new_state = truncate(X1, S1, V1, trunc, t=state.t + dt)
    except RankOverflowError as exc:
        raise RankOverflowError(f"{exc} (at t = {state.t:g})") from exc
    return new_state, B_new
