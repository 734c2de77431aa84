"""Run diagnostics: total energy, total mass, scalar flux, temperature,
and the per-step history table."""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .lowrank import LowRankState

HISTORY_COLUMNS = ("t", "rank", "mass", "energy", "rel_mass_err", "wall_s")


def total_energy(u, B: np.ndarray) -> float:
    """E = ||u||_F^2 / 2 + ||B||_2^2 / 2.

    For a low-rank state the Frobenius norm is taken on the coefficient
    matrix (orthonormal bases leave it invariant).
    """
    if isinstance(u, LowRankState):
        u_sq = float(np.sum(u.S**2))
    else:
        u_sq = float(np.sum(np.asarray(u) ** 2))
    return 0.5 * u_sq + 0.5 * float(np.sum(np.asarray(B) ** 2))


def scalar_flux(u) -> np.ndarray:
    """Zeroth-moment coefficient per cell."""
    if isinstance(u, LowRankState):
        return u.zeroth_moment()
    return np.asarray(u)[:, 0].copy()


def total_mass(u, B: np.ndarray, grid) -> float:
    """Cell-volume weighted sum of the zeroth moment plus internal energy."""
    phi = scalar_flux(u)
    return grid.cell_volume * float(np.sum(phi) + np.sum(B))


def temperature(B: np.ndarray, a_rad: float = 1.0) -> np.ndarray:
    """T = (B / a_rad)^(1/4); negative B is floored at zero with a warning."""
    B = np.asarray(B, dtype=float)
    if np.any(B < 0):
        warnings.warn(
            f"flooring {int(np.sum(B < 0))} negative internal-energy value(s) "
            "at zero for the temperature diagnostic",
            stacklevel=2,
        )
    return np.power(np.maximum(B, 0.0) / a_rad, 0.25)


@dataclass
class History:
    """Time series of (t, rank, mass, energy, rel_mass_err, wall_s)."""

    t: list[float] = field(default_factory=list)
    rank: list[int] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)
    rel_mass_err: list[float] = field(default_factory=list)
    wall_s: list[float] = field(default_factory=list)

    def append(self, t, rank, mass, energy, rel_mass_err, wall_s):
        if self.t and t <= self.t[-1]:
            raise ValueError("history times must be strictly increasing")
        self.t.append(float(t))
        self.rank.append(int(rank))
        self.mass.append(float(mass))
        self.energy.append(float(energy))
        self.rel_mass_err.append(float(rel_mass_err))
        self.wall_s.append(float(wall_s))

    def __len__(self) -> int:
        return len(self.t)

    def rows(self):
        return zip(self.t, self.rank, self.mass, self.energy,
                   self.rel_mass_err, self.wall_s)
