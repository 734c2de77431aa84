"""Moment bases in angle and their streaming matrices.

1D transport uses the normalized Legendre polynomials on [-1, 1]; the planar
2D extension uses real spherical harmonics, orthonormal on the unit sphere.
The streaming matrix A couples neighbouring moments through the direction
cosine; its absolute value |A| = Q|M|Q^T (eigenvector-wise) provides the
upwind-type stabilization, and |A|^(1/2) enters the energy estimates.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, lpmv, roots_legendre

from .errors import NumericalBlowupError


@dataclass(frozen=True)
class FluxMatrices:
    """Streaming matrix bundle for one transport direction.

    A is symmetric with spectral radius <= 1 (its eigenvalues are direction
    cosines); A_abs and A_abs_sqrt share its eigenvectors.
    """

    n_moments: int
    A: np.ndarray
    A_abs: np.ndarray
    A_abs_sqrt: np.ndarray


def legendre_vandermonde(n_moments: int, mu) -> np.ndarray:
    """Evaluate the first ``n_moments`` normalized Legendre polynomials.

    Returns shape ``(len(mu), n_moments)`` with column n holding P_n(mu),
    normalized so that the family is orthonormal in L^2([-1, 1]).
    """
    if n_moments < 1:
        raise ValueError(f"n_moments must be >= 1, got {n_moments}")
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if np.any(mu < -1.0) or np.any(mu > 1.0):
        raise ValueError("mu must lie in [-1, 1]")
    P = np.empty((mu.size, n_moments))
    P[:, 0] = 1.0
    if n_moments > 1:
        P[:, 1] = mu
    for n in range(1, n_moments - 1):
        P[:, n + 1] = ((2 * n + 1) * mu * P[:, n] - n * P[:, n - 1]) / (n + 1)
    norms = np.sqrt((2.0 * np.arange(n_moments) + 1.0) / 2.0)
    return P * norms


def legendre_eval(n: int, mu):
    """Normalized Legendre polynomial P_n(mu), <P_m, P_n> = delta_mn."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    vals = legendre_vandermonde(n + 1, mu)[:, n]
    return vals[0] if np.ndim(mu) == 0 else vals


def build_flux_matrix(n_moments: int) -> np.ndarray:
    """Streaming matrix A_mn = <P_m, mu P_n> for normalized Legendre moments.

    Symmetric tridiagonal with zero diagonal and off-diagonal entries
    (n+1)/sqrt((2n+1)(2n+3)); assembled from the three-term recurrence.
    """
    if n_moments < 1:
        raise ValueError(f"n_moments must be >= 1, got {n_moments}")
    n = np.arange(n_moments - 1)
    off = (n + 1.0) / np.sqrt((2.0 * n + 1.0) * (2.0 * n + 3.0))
    A = np.zeros((n_moments, n_moments))
    A[n, n + 1] = off
    A[n + 1, n] = off
    return A


def abs_flux_matrix(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (|A|, |A|^(1/2)) via the eigendecomposition A = Q M Q^T."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    try:
        eigvals, Q = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalBlowupError(
            f"eigendecomposition of {A.shape[0]}x{A.shape[0]} streaming matrix "
            f"failed: {exc}"
        ) from exc
    absvals = np.abs(eigvals)
    A_abs = (Q * absvals) @ Q.T
    A_abs_sqrt = (Q * np.sqrt(absvals)) @ Q.T
    return A_abs, A_abs_sqrt


def flux_matrices_1d(n_moments: int) -> FluxMatrices:
    """FluxMatrices bundle for the 1D normalized-Legendre basis."""
    A = build_flux_matrix(n_moments)
    A_abs, A_abs_sqrt = abs_flux_matrix(A)
    return FluxMatrices(n_moments, A, A_abs, A_abs_sqrt)


# -- real spherical harmonics (planar 2D transport) -------------------------
#
# Ordering is (l, m) lexicographic with l = 0..n_pn and m = -l..l, so index 0
# is the isotropic (0, 0) mode that couples to the internal energy.  The
# harmonics are real, orthonormal on S^2, and carry no Condon-Shortley phase
# (so <Y_00, Omega_1 Y_11> = +1/sqrt(3)).


def sph_index_table(n_pn: int) -> list[tuple[int, int]]:
    """(l, m) pairs in basis order; length is (n_pn + 1)^2."""
    return [(l, m) for l in range(n_pn + 1) for m in range(-l, l + 1)]


def real_sph_harm_basis(n_pn: int, mu: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Evaluate the real spherical harmonics at directions (mu, phi).

    mu is the polar cosine Omega_3, phi the azimuth; both are flat arrays of
    equal length.  Returns shape ``(len(mu), (n_pn+1)^2)``.
    """
    if n_pn < 0:
        raise ValueError(f"n_pn must be >= 0, got {n_pn}")
    mu = np.asarray(mu, dtype=float)
    phi = np.asarray(phi, dtype=float)
    cols = []
    for l, m in sph_index_table(n_pn):
        am = abs(m)
        # lpmv carries the Condon-Shortley (-1)^m; cancel it.
        P = (-1.0) ** am * lpmv(am, l, mu)
        norm = np.sqrt((2 * l + 1) / (4.0 * np.pi)) * np.exp(
            0.5 * (gammaln(l - am + 1) - gammaln(l + am + 1))
        )
        if m == 0:
            cols.append(norm * P)
        elif m > 0:
            cols.append(np.sqrt(2.0) * norm * P * np.cos(m * phi))
        else:
            cols.append(np.sqrt(2.0) * norm * P * np.sin(am * phi))
    return np.stack(cols, axis=1)


def sphere_quadrature(n_polar: int, n_azimuth: int):
    """Product quadrature on S^2: Gauss-Legendre in mu, uniform in phi.

    Returns flat arrays (mu, phi, w) with sum(w f) ~= integral of f over the
    sphere; exact for spherical polynomials when n_polar and n_azimuth are
    large enough for the integrand's degree.
    """
    nodes, weights = roots_legendre(n_polar)
    phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    w_phi = 2.0 * np.pi / n_azimuth
    mu_g, phi_g = np.meshgrid(nodes, phi, indexing="ij")
    w_g = np.broadcast_to(weights[:, None] * w_phi, mu_g.shape)
    return mu_g.ravel(), phi_g.ravel(), w_g.ravel().copy()


def build_pn_flux_matrices_2d(n_pn: int) -> tuple[FluxMatrices, FluxMatrices]:
    """Streaming matrices for the in-plane direction cosines Omega_1, Omega_3.

    Assembled by quadrature exact for the polynomial integrands (degree
    2 n_pn + 1); both matrices are symmetric with spectral radius <= 1.
    """
    if n_pn < 1:
        raise ValueError(f"n_pn must be >= 1, got {n_pn}")
    mu, phi, w = sphere_quadrature(n_pn + 2, 2 * (n_pn + 2))
    Y = real_sph_harm_basis(n_pn, mu, phi)
    omega_1 = np.sqrt(1.0 - mu**2) * np.cos(phi)
    omega_3 = mu
    out = []
    for omega in (omega_1, omega_3):
        M = Y.T @ (Y * (w * omega)[:, None])
        M = 0.5 * (M + M.T)
        A_abs, A_abs_sqrt = abs_flux_matrix(M)
        out.append(FluxMatrices(Y.shape[1], M, A_abs, A_abs_sqrt))
    return out[0], out[1]
