"""Periodic finite-volume grids and stencil matrices.

The first-order transport stencil D^x (central difference) is stabilized by
D^xx (undivided second difference); D^+ is the forward difference whose
negative Gram matrix reproduces D^xx, which is what makes the discrete
energy estimates work.  All matrices close periodically.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class Grid1D:
    """Equidistant periodic grid of cell midpoints."""

    n_x: int
    x_min: float = -10.0
    x_max: float = 10.0

    def __post_init__(self):
        if self.n_x < 3:
            raise ValueError(f"n_x must be >= 3, got {self.n_x}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @property
    def n_cells(self) -> int:
        return self.n_x

    @property
    def cell_volume(self) -> float:
        return self.dx

    @cached_property
    def centers(self) -> np.ndarray:
        return self.x_min + self.dx * (np.arange(self.n_x) + 0.5)


@dataclass(frozen=True)
class Grid2D:
    """Tensor product of two 1D grids, cells flattened C-order (x outer)."""

    gx: Grid1D
    gy: Grid1D

    @property
    def n_cells(self) -> int:
        return self.gx.n_x * self.gy.n_x

    @property
    def cell_volume(self) -> float:
        return self.gx.dx * self.gy.dx

    @cached_property
    def centers(self) -> np.ndarray:
        """(n_cells, 2) array of cell midpoints."""
        cx, cy = np.meshgrid(self.gx.centers, self.gy.centers, indexing="ij")
        return np.column_stack([cx.ravel(), cy.ravel()])


@dataclass(frozen=True)
class Stencils:
    """Periodic stencil matrices for one spatial direction.

    Dxx = -Dplus^T Dplus holds structurally; Dx and Dxx annihilate constants.
    ``dx`` is the cell width of the underlying 1D grid (used for CFL guards).
    """

    Dx: sparse.csr_matrix
    Dxx: sparse.csr_matrix
    Dplus: sparse.csr_matrix
    dx: float


def _periodic(n: int, rows, cols, vals) -> sparse.csr_matrix:
    rows = np.concatenate(rows)
    cols = np.concatenate(cols) % n
    vals = np.concatenate(vals)
    return sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


def build_stencils(grid: Grid1D) -> Stencils:
    """Assemble D^x, D^xx and D^+ for a periodic 1D grid."""
    n, dx = grid.n_x, grid.dx
    p = np.arange(n)
    c1 = 1.0 / (2.0 * dx)
    Dx = _periodic(n, [p, p], [p + 1, p - 1], [np.full(n, c1), np.full(n, -c1)])
    Dxx = _periodic(
        n,
        [p, p, p],
        [p, p + 1, p - 1],
        [np.full(n, -1.0 / dx), np.full(n, c1), np.full(n, c1)],
    )
    cp = 1.0 / np.sqrt(2.0 * dx)
    Dplus = _periodic(n, [p, p], [p, p + 1], [np.full(n, -cp), np.full(n, cp)])
    return Stencils(Dx, Dxx, Dplus, dx)


def build_stencils_2d(grid: Grid2D) -> tuple[Stencils, Stencils]:
    """Per-dimension stencils on the flattened 2D index (Kronecker lift)."""
    sx = build_stencils(grid.gx)
    sy = build_stencils(grid.gy)
    ix = sparse.identity(grid.gx.n_x, format="csr")
    iy = sparse.identity(grid.gy.n_x, format="csr")
    lift_x = Stencils(
        sparse.kron(sx.Dx, iy, format="csr"),
        sparse.kron(sx.Dxx, iy, format="csr"),
        sparse.kron(sx.Dplus, iy, format="csr"),
        sx.dx,
    )
    lift_y = Stencils(
        sparse.kron(ix, sy.Dx, format="csr"),
        sparse.kron(ix, sy.Dxx, format="csr"),
        sparse.kron(ix, sy.Dplus, format="csr"),
        sy.dx,
    )
    return lift_x, lift_y


def fourier_symbols(grid: Grid1D):
    """Eigenvalues of the stencil matrices on discrete Fourier modes.

    For frequency omega_a = 2 pi a / n_x the mode v_k = exp(i omega_a k)
    satisfies Dx v = lam_x v etc.  Returns (lam_x, lam_xx, lam_plus), each of
    length n_x; |lam_plus|^2 = -lam_xx holds per frequency.
    """
    omega = 2.0 * np.pi * np.arange(grid.n_x) / grid.n_x
    dx = grid.dx
    lam_x = 1j * np.sin(omega) / dx
    lam_xx = (np.cos(omega) - 1.0) / dx
    lam_plus = (np.cos(omega) + 1j * np.sin(omega) - 1.0) / np.sqrt(2.0 * dx)
    return lam_x, lam_xx, lam_plus
