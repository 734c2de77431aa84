import numpy as np
import pytest

from dlrt.errors import RankOverflowError
from dlrt.lowrank import orthonormality_defect
from dlrt.truncation import TruncationConfig, truncate_conservative, truncate_standard

from conftest import random_orthonormal


def factors_with_spectrum(rng, n_x, n_m, svals):
    r = len(svals)
    X = random_orthonormal(rng, n_x, r)
    V = random_orthonormal(rng, n_m, r)
    return X, np.diag(np.asarray(svals, dtype=float)), V


def flux_shaped_factors(rng, n_x, n_m, r):
    """Inputs shaped like the stable step's output: V's first column is e_1."""
    X = random_orthonormal(rng, n_x, r)
    V = np.zeros((n_m, r))
    V[0, 0] = 1.0
    V[1:, 1:] = random_orthonormal(rng, n_m - 1, r - 1)
    S = rng.standard_normal((r, r))
    return X, S, V


class TestStandard:
    def test_tail_criterion_worked_example(self, rng):
        X, S, V = factors_with_spectrum(rng, 20, 10, [1.0, 1e-3, 1e-9])
        cfg = TruncationConfig(theta_rel=1e-2, r_min=1, r_max=10, absolute=True)
        out = truncate_standard(X, S, V, cfg)
        assert out.rank == 1

    def test_zero_tolerance_keeps_everything_nonzero(self, rng):
        X, S, V = factors_with_spectrum(rng, 20, 10, [1.0, 0.5, 1e-8, 0.0])
        cfg = TruncationConfig(theta_rel=0.0, r_min=1, r_max=10, absolute=True)
        out = truncate_standard(X, S, V, cfg)
        assert out.rank == 3
        err = np.linalg.norm(out.densify() - X @ S @ V.T)
        assert err < 1e-12

    def test_truncation_error_bounded_by_tolerance(self, rng):
        X = random_orthonormal(rng, 30, 8)
        V = random_orthonormal(rng, 12, 8)
        S = rng.standard_normal((8, 8))
        cfg = TruncationConfig(theta_rel=0.3, r_min=1, r_max=8)
        out = truncate_standard(X, S, V, cfg)
        svals = np.linalg.svd(S, compute_uv=False)
        theta = 0.3 * svals[0]
        err = np.linalg.norm(out.densify() - X @ S @ V.T)
        assert err <= theta * (1 + 1e-12)
        # Eckart-Young: the error equals the discarded tail
        tail = np.sqrt(np.sum(svals[out.rank :] ** 2))
        assert err == pytest.approx(tail, rel=1e-10, abs=1e-14)

    def test_rank_clamps(self, rng):
        X, S, V = factors_with_spectrum(rng, 20, 10, [1.0, 0.9, 0.8, 0.7])
        low = truncate_standard(X, S, V, TruncationConfig(10.0, r_min=3, r_max=10, absolute=True))
        assert low.rank == 3
        capped = truncate_standard(X, S, V, TruncationConfig(0.75, r_min=1, r_max=3, absolute=True))
        assert capped.rank == 3

    def test_unreachable_tolerance_raises(self, rng):
        X, S, V = factors_with_spectrum(rng, 20, 10, [1.0, 1.0, 1.0])
        cfg = TruncationConfig(theta_rel=0.0, r_min=1, r_max=2, absolute=True)
        with pytest.raises(RankOverflowError):
            truncate_standard(X, S, V, cfg)

    def test_orthonormal_output(self, rng):
        X = random_orthonormal(rng, 25, 6)
        V = random_orthonormal(rng, 9, 6)
        S = rng.standard_normal((6, 6))
        out = truncate_standard(X, S, V, TruncationConfig(0.2, r_max=6))
        assert orthonormality_defect(out.X) < 1e-10
        assert orthonormality_defect(out.V) < 1e-10


class TestConservative:
    def test_flux_column_preserved_under_heavy_truncation(self, rng):
        X, S, V = flux_shaped_factors(rng, 24, 10, 5)
        cfg = TruncationConfig(theta_rel=0.9, r_min=1, r_max=10)
        out = truncate_conservative(X, S, V, cfg)
        col_in = (X @ S @ V.T)[:, 0]
        col_out = out.densify()[:, 0]
        assert np.max(np.abs(col_out - col_in)) < 1e-13 * max(np.max(np.abs(col_in)), 1e-300)
        assert out.rank < 5

    def test_zero_tolerance_reconstructs(self, rng):
        X, S, V = flux_shaped_factors(rng, 24, 10, 5)
        cfg = TruncationConfig(theta_rel=0.0, r_min=1, r_max=10, absolute=True)
        out = truncate_conservative(X, S, V, cfg)
        dense = X @ S @ V.T
        assert np.linalg.norm(out.densify() - dense) < 1e-12 * np.linalg.norm(dense)

    def test_pure_isotropic_input(self, rng):
        n_x, n_m = 20, 8
        x = random_orthonormal(rng, n_x, 1)
        v = np.zeros((n_m, 1))
        v[0, 0] = 1.0
        s = np.array([[2.5]])
        out = truncate_conservative(x, s, v, TruncationConfig(0.5, r_max=8))
        assert out.rank == 1
        assert np.linalg.norm(out.densify() - x @ s @ v.T) < 1e-13

    def test_zero_conserved_column(self, rng):
        X, S, V = flux_shaped_factors(rng, 24, 10, 4)
        S[:, 0] = 0.0  # no isotropic content
        cfg = TruncationConfig(theta_rel=0.0, r_min=1, r_max=10, absolute=True)
        out = truncate_conservative(X, S, V, cfg)
        dense = X @ S @ V.T
        assert np.linalg.norm(out.densify() - dense) < 1e-12 * max(np.linalg.norm(dense), 1e-300)

    def test_total_mass_invariant(self, rng):
        X, S, V = flux_shaped_factors(rng, 32, 12, 6)
        cfg = TruncationConfig(theta_rel=0.5, r_min=1, r_max=12)
        out = truncate_conservative(X, S, V, cfg)
        m_in = np.sum((X @ S @ V.T)[:, 0])
        m_out = np.sum(out.densify()[:, 0])
        assert abs(m_in - m_out) < 1e-13 * max(abs(m_in), 1.0)

    def test_requires_e1_leading_direction(self, rng):
        X = random_orthonormal(rng, 16, 3)
        V = random_orthonormal(rng, 8, 3)
        S = rng.standard_normal((3, 3))
        with pytest.raises(ValueError, match="e_1"):
            truncate_conservative(X, S, V, TruncationConfig(0.1, r_max=8))

    def test_orthonormal_output_and_rank_bounds(self, rng):
        X, S, V = flux_shaped_factors(rng, 24, 10, 6)
        floor = truncate_conservative(
            X, S, V, TruncationConfig(theta_rel=10.0, r_min=2, r_max=14, absolute=True)
        )
        assert floor.rank == 2
        out = truncate_conservative(X, S, V, TruncationConfig(0.05, r_min=1, r_max=14))
        assert 1 <= out.rank <= 7
        for state in (floor, out):
            assert orthonormality_defect(state.X) < 1e-10
            assert orthonormality_defect(state.V) < 1e-10

    def test_unreachable_cap_raises(self, rng):
        X, S, V = flux_shaped_factors(rng, 24, 10, 6)
        cfg = TruncationConfig(theta_rel=0.0, r_min=1, r_max=3, absolute=True)
        with pytest.raises(RankOverflowError):
            truncate_conservative(X, S, V, cfg)

    def test_randomized_flux_preservation_sweep(self, rng):
        # many trials across ranks; this is the property the scheme's local
        # conservation rests on
        worst = 0.0
        for trial in range(100):
            r = 2 + trial % 9
            X, S, V = flux_shaped_factors(rng, 30, 14, r)
            cfg = TruncationConfig(theta_rel=0.3, r_min=1, r_max=14)
            out = truncate_conservative(X, S, V, cfg)
            col_in = (X @ S @ V.T)[:, 0]
            col_out = out.densify()[:, 0]
            denom = max(np.max(np.abs(col_in)), 1e-300)
            worst = max(worst, np.max(np.abs(col_out - col_in)) / denom)
        assert worst < 1e-13
