"""Naive IMEX rank-adaptive scheme and the energy-growth counterexample.

The scheme treats the internal energy explicitly inside the K/L/S substeps
and only the moment self-absorption implicitly.  It is the negative control:
spatially constant near-equilibrium data exists for which one step strictly
increases total energy, which the stable scheme never does.
"""

from dataclasses import dataclass

import numpy as np

from .lowrank import LowRankState, complete_basis
from .ops import as_dims, check_finite
from .truncation import TruncationConfig, truncate_standard


def naive_step(
    state: LowRankState,
    B: np.ndarray,
    stencils,
    flux,
    sigma: float,
    dt: float,
    trunc: TruncationConfig,
    step: int | None = None,
) -> tuple[LowRankState, np.ndarray]:
    """One naive IMEX step (explicit B source, implicit self-absorption)."""
    stencils, flux = as_dims(stencils, flux)
    X0, S0, V0 = state.X, state.S, state.V
    damp = 1.0 + sigma * dt

    K = X0 @ S0
    k_new = K.copy()
    for st, fl in zip(stencils, flux):
        W_a = V0.T @ fl.A @ V0
        W_abs = V0.T @ fl.A_abs @ V0
        k_new -= dt * (st.Dx @ K @ W_a.T)
        k_new += dt * (st.Dxx @ K @ W_abs.T)
    k_new = (k_new + sigma * dt * np.outer(B, V0[0, :])) / damp

    L = V0 @ S0.T
    l_new = L.copy()
    for st, fl in zip(stencils, flux):
        M = X0.T @ (st.Dx @ X0)
        N = X0.T @ (st.Dxx @ X0)
        l_new -= dt * (fl.A @ L @ M.T)
        l_new += dt * (fl.A_abs @ L @ N.T)
    src = np.zeros_like(L)
    src[0, :] = X0.T @ B
    l_new = (l_new + sigma * dt * src) / damp

    X_hat, _ = np.linalg.qr(np.hstack([k_new, X0]))
    V_hat, _ = np.linalg.qr(np.hstack([l_new, V0]))
    S0_tilde = (X_hat.T @ X0) @ S0 @ (V_hat.T @ V0).T

    S_hat = S0_tilde.copy()
    for st, fl in zip(stencils, flux):
        M = X_hat.T @ (st.Dx @ X_hat)
        N = X_hat.T @ (st.Dxx @ X_hat)
        W_a = V_hat.T @ fl.A @ V_hat
        W_abs = V_hat.T @ fl.A_abs @ V_hat
        S_hat -= dt * (M @ S0_tilde @ W_a.T)
        S_hat += dt * (N @ S0_tilde @ W_abs.T)
    S_hat = (S_hat + sigma * dt * np.outer(X_hat.T @ B, V_hat[0, :])) / damp

    u0 = X_hat @ (S_hat @ V_hat[0, :])
    B_new = (B + sigma * dt * u0) / damp
    check_finite(S_hat, "coefficient matrix", step)
    check_finite(B_new, "internal energy", step)
    return truncate_standard(X_hat, S_hat, V_hat, trunc, t=state.t + dt), B_new


@dataclass(frozen=True)
class CounterexampleSpec:
    """Spatially constant near-equilibrium data that the naive scheme heats up.

    The perturbation amplitude must satisfy

        0 < alpha < sigma dt u1 / (1 + s + s^2 + s^3/2),   s = sigma dt,

    which is exactly the regime in which one naive step increases the total
    energy.
    """

    sigma: float
    dt: float
    u1: float
    alpha: float

    def alpha_bound(self) -> float:
        s = self.sigma * self.dt
        return s * self.u1 / (1.0 + s + s**2 + 0.5 * s**3)

    def __post_init__(self):
        if self.sigma <= 0 or self.dt <= 0:
            raise ValueError("sigma and dt must be positive")
        if not 0.0 < self.alpha < self.alpha_bound():
            raise ValueError(
                f"alpha = {self.alpha:g} outside the admissible interval "
                f"(0, {self.alpha_bound():g})"
            )


def counterexample_energy_increment(spec: CounterexampleSpec) -> float:
    """Per-cell total-energy change of one naive step on the counterexample.

    Closed form: s^2 alpha u1 - s alpha^2 - s^2 alpha^2 / 2
    - s^2 alpha^2 (1 + s)^2 / 2 with s = sigma dt; positive for admissible
    alpha.
    """
    s = spec.sigma * spec.dt
    a = spec.alpha
    return (
        s**2 * a * spec.u1
        - s * a**2
        - 0.5 * s**2 * a**2
        - 0.5 * s**2 * a**2 * (1.0 + s) ** 2
    )


def build_counterexample(
    spec: CounterexampleSpec, n_x: int, n_moments: int
) -> tuple[LowRankState, np.ndarray]:
    """Initial data for which the naive step provably gains energy.

    The state is spatially constant and isotropic; rank-2 bases span the
    constant spatial mode and the leading two moments so that every
    projection in the naive step is exact.
    """
    if n_x < 2 or n_moments < 2:
        raise ValueError("counterexample needs n_x >= 2 and n_moments >= 2")
    s = spec.sigma * spec.dt
    B0 = np.full(n_x, spec.u1 + spec.alpha * (1.0 + s))
    u00 = spec.u1 - s * spec.alpha * (1.0 + s)

    X = complete_basis(np.full((n_x, 1), 1.0 / np.sqrt(n_x)), 1)
    V = np.zeros((n_moments, 2))
    V[0, 0] = 1.0
    V[1, 1] = 1.0
    S = np.diag([u00 * np.sqrt(n_x), 0.0])
    return LowRankState(X, S, V), B0
