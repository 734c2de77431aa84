import numpy as np
import pytest
from scipy.special import roots_legendre

from dlrt.angular import (
    abs_flux_matrix,
    build_flux_matrix,
    build_pn_flux_matrices_2d,
    flux_matrices_1d,
    legendre_eval,
    legendre_vandermonde,
    real_sph_harm_basis,
    sph_index_table,
    sphere_quadrature,
)


def gauss_inner(f, g, n_nodes=64):
    """Quadrature oracle for inner products on [-1, 1]."""
    x, w = roots_legendre(n_nodes)
    return float(np.sum(w * f(x) * g(x)))


class TestLegendre:
    def test_constant_is_normalized(self):
        for mu in (-1.0, 0.0, 0.37, 1.0):
            assert legendre_eval(0, mu) == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-15)

    def test_degree_one_at_right_endpoint(self):
        # mu normalized by its L2 norm sqrt(2/3); oracle below confirms
        assert legendre_eval(1, 1.0) == pytest.approx(np.sqrt(1.5), abs=1e-14)
        norm_sq = gauss_inner(lambda x: x, lambda x: x)
        assert legendre_eval(1, 1.0) == pytest.approx(1.0 / np.sqrt(norm_sq), rel=1e-14)

    def test_orthonormal_under_quadrature(self):
        n = 10
        x, w = roots_legendre(64)
        P = legendre_vandermonde(n, x)
        gram = P.T @ (P * w[:, None])
        assert np.max(np.abs(gram - np.eye(n))) < 1e-13

    def test_cross_degree_orthogonality(self):
        val = gauss_inner(lambda x: legendre_eval(2, x), lambda x: legendre_eval(3, x))
        assert abs(val) < 1e-14

    def test_argument_errors(self):
        with pytest.raises(ValueError):
            legendre_eval(-1, 0.0)
        with pytest.raises(ValueError):
            legendre_eval(2, 1.5)
        with pytest.raises(ValueError):
            legendre_vandermonde(0, 0.0)


class TestFluxMatrix1D:
    def test_single_moment_vanishes(self):
        assert build_flux_matrix(1) == pytest.approx(np.zeros((1, 1)))

    def test_first_coupling_entry(self):
        A = build_flux_matrix(2)
        oracle = gauss_inner(
            lambda x: legendre_eval(0, x), lambda x: x * legendre_eval(1, x)
        )
        assert A[0, 1] == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-14)
        assert A[0, 1] == pytest.approx(oracle, abs=1e-14)

    def test_matches_quadrature_assembly(self):
        n = 8
        A = build_flux_matrix(n)
        x, w = roots_legendre(32)
        P = legendre_vandermonde(n, x)
        A_quad = P.T @ (P * (w * x)[:, None])
        assert np.max(np.abs(A - A_quad)) < 1e-13

    def test_recurrence_entries(self):
        n = 12
        A = build_flux_matrix(n)
        k = np.arange(n - 1)
        expected = (k + 1) / np.sqrt((2 * k + 1) * (2 * k + 3))
        assert np.allclose(np.diag(A, 1), expected, atol=1e-15)

    def test_symmetric_zero_diagonal(self):
        A = build_flux_matrix(9)
        assert np.array_equal(A, A.T)
        assert np.all(np.diag(A) == 0.0)

    @pytest.mark.parametrize("n", [2, 5, 30, 100])
    def test_spectral_radius_at_most_one(self, n):
        fm = flux_matrices_1d(n)
        assert np.max(np.abs(np.linalg.eigvalsh(fm.A))) <= 1.0 + 1e-12


class TestAbsFluxMatrix:
    def test_zero_matrix(self):
        a_abs, a_sqrt = abs_flux_matrix(np.zeros((1, 1)))
        assert a_abs == pytest.approx(0.0)
        assert a_sqrt == pytest.approx(0.0)

    def test_two_by_two_closed_form(self):
        # eigenvalues +-1/sqrt(3) with eigenvectors (1, +-1)/sqrt(2)
        a = 1.0 / np.sqrt(3.0)
        A = np.array([[0.0, a], [a, 0.0]])
        a_abs, a_sqrt = abs_flux_matrix(A)
        assert np.allclose(a_abs, a * np.eye(2), atol=1e-14)
        assert np.allclose(a_sqrt, np.sqrt(a) * np.eye(2), atol=1e-14)

    def test_square_identity(self, rng):
        A = rng.standard_normal((5, 5))
        A = 0.5 * (A + A.T)
        a_abs, _ = abs_flux_matrix(A)
        scale = np.linalg.norm(A @ A)
        assert np.linalg.norm(a_abs @ a_abs - A @ A) < 1e-12 * scale

    def test_sqrt_squares_to_abs(self):
        fm = flux_matrices_1d(12)
        scale = np.linalg.norm(fm.A_abs)
        assert np.linalg.norm(fm.A_abs_sqrt @ fm.A_abs_sqrt - fm.A_abs) < 1e-12 * scale

    def test_commutes_with_a(self):
        fm = flux_matrices_1d(16)
        comm = fm.A_abs @ fm.A - fm.A @ fm.A_abs
        assert np.linalg.norm(comm) <= 1e-12 * np.linalg.norm(fm.A) ** 2

    def test_positive_semidefinite(self):
        fm = flux_matrices_1d(7)
        assert np.min(np.linalg.eigvalsh(fm.A_abs)) > -1e-13

    def test_decomposition_failure_is_diagnosed(self):
        from dlrt.errors import NumericalBlowupError

        bad = np.full((3, 3), np.nan)
        with pytest.raises(NumericalBlowupError, match="eigendecomposition"):
            abs_flux_matrix(bad)

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            abs_flux_matrix(np.zeros((2, 3)))


class TestSphericalHarmonics2D:
    def test_moment_count(self):
        ax, az = build_pn_flux_matrices_2d(1)
        assert ax.n_moments == 4
        assert ax.A.shape == (4, 4)

    def test_orthonormal_on_sphere(self):
        n_pn = 4
        mu, phi, w = sphere_quadrature(2 * n_pn + 8, 4 * n_pn + 16)
        Y = real_sph_harm_basis(n_pn, mu, phi)
        gram = Y.T @ (Y * w[:, None])
        assert np.max(np.abs(gram - np.eye((n_pn + 1) ** 2))) < 1e-12

    def test_y00_streams_into_y11(self):
        # independent quadrature oracle at a resolution the assembly never uses
        ax, _ = build_pn_flux_matrices_2d(1)
        idx = sph_index_table(1)
        i00 = idx.index((0, 0))
        i11 = idx.index((1, 1))
        mu, phi, w = sphere_quadrature(48, 96)
        Y = real_sph_harm_basis(1, mu, phi)
        omega1 = np.sqrt(1.0 - mu**2) * np.cos(phi)
        oracle = float(np.sum(w * Y[:, i00] * omega1 * Y[:, i11]))
        assert oracle == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-13)
        assert ax.A[i00, i11] == pytest.approx(oracle, abs=1e-13)

    @pytest.mark.parametrize("n_pn", [1, 3, 5])
    def test_symmetry_against_oracle(self, n_pn):
        ax, az = build_pn_flux_matrices_2d(n_pn)
        mu, phi, w = sphere_quadrature(64, 128)
        Y = real_sph_harm_basis(n_pn, mu, phi)
        for fm, omega in ((ax, np.sqrt(1.0 - mu**2) * np.cos(phi)), (az, mu)):
            oracle = Y.T @ (Y * (w * omega)[:, None])
            assert np.max(np.abs(oracle - oracle.T)) < 1e-12
            assert np.max(np.abs(fm.A - oracle)) < 1e-12

    def test_spectral_radius_and_sqrt(self):
        ax, az = build_pn_flux_matrices_2d(3)
        for fm in (ax, az):
            assert np.max(np.abs(np.linalg.eigvalsh(fm.A))) <= 1.0 + 1e-12
            scale = max(np.linalg.norm(fm.A_abs), 1e-300)
            assert np.linalg.norm(fm.A_abs_sqrt @ fm.A_abs_sqrt - fm.A_abs) < 1e-12 * scale

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            build_pn_flux_matrices_2d(0)
