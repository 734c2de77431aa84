"""Bundled problem setups and run configuration.

Three benchmark problems are provided: an isotropic near-delta pulse
(plane_source), the same pulse plus a constant isotropic source strip and a
hot background (su_olson), and a planar 2D directed beam (beam_2d).  Moments
are stored in the coefficient convention: the scalar flux diagnostic is the
raw zeroth coefficient u_{j0}, matching the discrete mass definition
m = dV * sum_j (u_{j0} + B_j) used throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .angular import FluxMatrices, build_pn_flux_matrices_2d, flux_matrices_1d, \
    real_sph_harm_basis, sphere_quadrature
from .errors import ConfigError
from .grids import Grid1D, Grid2D, Stencils, build_stencils, build_stencils_2d
from .lowrank import LowRankState, lowrank_from_factors

PROBLEMS = ("plane_source", "su_olson", "beam_2d")
SOLVERS = ("full", "dlra", "naive")
TRUNCATIONS = ("conservative", "standard")


@dataclass(frozen=True)
class RunConfig:
    problem: str = "plane_source"
    solver: str = "dlra"
    n_x: int = 1000
    n_y: int = 1000
    n_moments: int = 500
    n_pn: int = 29
    cfl: float = 0.99
    t_end: float = 8.0
    sigma: float = 1.0
    theta_rel: float = 0.1
    truncation: str = "conservative"
    r_start: int = 20
    r_max: int = 50
    a_rad: float = 1.0
    x_min: float = -10.0
    x_max: float = 10.0
    y_min: float = -1.0
    y_max: float = 1.0
    output_dir: str = ""
    snapshot_times: tuple[float, ...] = ()
    allow_cfl_violation: bool = False
    emit_fxmu: bool = False

    def validate(self) -> "RunConfig":
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {self.problem!r}; choose from {PROBLEMS}")
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver {self.solver!r}; choose from {SOLVERS}")
        if self.truncation not in TRUNCATIONS:
            raise ConfigError(
                f"unknown truncation {self.truncation!r}; choose from {TRUNCATIONS}"
            )
        if self.t_end < 0:
            raise ConfigError(f"t_end must be >= 0, got {self.t_end}")
        if self.cfl <= 0:
            raise ConfigError(f"cfl must be positive, got {self.cfl}")
        if self.cfl > 1.0 and not self.allow_cfl_violation:
            raise ConfigError(
                f"cfl = {self.cfl} implies dt > dx, violating the stability "
                "restriction dt <= dx; set allow_cfl_violation = true to force"
            )
        if self.n_x < 3:
            raise ConfigError(f"n_x must be >= 3, got {self.n_x}")
        if self.problem == "beam_2d":
            if self.n_y < 3:
                raise ConfigError(f"n_y must be >= 3, got {self.n_y}")
            if self.n_pn < 1:
                raise ConfigError(f"n_pn must be >= 1, got {self.n_pn}")
        elif self.n_moments < 2:
            raise ConfigError(f"n_moments must be >= 2, got {self.n_moments}")
        if self.sigma < 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}")
        if self.theta_rel < 0:
            raise ConfigError(f"theta_rel must be >= 0, got {self.theta_rel}")
        if not 1 <= self.r_start <= self.r_max:
            raise ConfigError(
                f"need 1 <= r_start <= r_max, got r_start={self.r_start}, "
                f"r_max={self.r_max}"
            )
        if any(t < 0 or t > self.t_end for t in self.snapshot_times):
            raise ConfigError("snapshot_times must lie in [0, t_end]")
        return self


# Per-problem defaults mirror the bundled experiment parameterizations.
_PROBLEM_DEFAULTS = {
    "plane_source": dict(n_x=1000, n_moments=500, cfl=0.99, t_end=8.0, sigma=1.0,
                         theta_rel=0.1, r_start=20, r_max=50,
                         x_min=-10.0, x_max=10.0),
    "su_olson": dict(n_x=1000, n_moments=500, cfl=0.99, t_end=3.16, sigma=1.0,
                     theta_rel=1e-2, r_start=20, r_max=50,
                     x_min=-10.0, x_max=10.0),
    "beam_2d": dict(n_x=500, n_y=500, n_pn=29, cfl=0.7, t_end=0.5, sigma=0.5,
                    theta_rel=5e-4, r_start=100, r_max=100,
                    x_min=-1.0, x_max=1.0, y_min=-1.0, y_max=1.0),
}

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def default_config(problem: str, **overrides) -> RunConfig:
    if problem not in PROBLEMS:
        raise ConfigError(f"unknown problem {problem!r}; choose from {PROBLEMS}")
    kw = dict(_PROBLEM_DEFAULTS[problem])
    kw.update(overrides)
    return RunConfig(problem=problem, **kw).validate()


def _parse_value(key: str, raw: str):
    if key not in _FIELD_TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    raw = raw.strip()
    typ = _FIELD_TYPES[key]
    try:
        if typ == "int":
            return int(raw)
        if typ == "float":
            return float(raw)
        if typ == "bool":
            if raw.lower() in ("true", "1", "yes", "on"):
                return True
            if raw.lower() in ("false", "0", "no", "off"):
                return False
            raise ValueError(raw)
        if typ == "tuple[float, ...]":
            if not raw:
                return ()
            return tuple(float(x) for x in raw.split(","))
        return raw
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key} = {raw!r} as {typ}") from exc


def parse_config(source: str | Path, overrides: dict[str, str] | None = None) -> RunConfig:
    """Parse a flat key = value config (path or literal text).

    Optional ``[problem_name]`` sections scope keys to one problem; keys from
    the active problem's section override top-level keys.  Unset keys fall
    back to the selected problem's defaults.
    """
    path = Path(source) if isinstance(source, Path) else None
    if path is None:
        text = str(source)
        candidate = Path(text)
        if "\n" not in text and "=" not in text and candidate.is_file():
            path = candidate
    if path is not None:
        text = path.read_text()

    top: dict[str, str] = {}
    sections: dict[str, dict[str, str]] = {}
    current = top
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            name = stripped[1:-1].strip()
            if name not in PROBLEMS:
                raise ConfigError(f"line {lineno}: unknown section [{name}]")
            current = sections.setdefault(name, {})
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        current[key.strip()] = raw.strip()

    merged = dict(top)
    if overrides:
        merged.update({k: str(v) for k, v in overrides.items()})
    problem = merged.get("problem", "plane_source")
    if problem not in PROBLEMS:
        raise ConfigError(f"unknown problem {problem!r}; choose from {PROBLEMS}")
    layered = dict(top)
    layered.update(sections.get(problem, {}))
    if overrides:
        layered.update({k: str(v) for k, v in overrides.items()})
    kw = {key: _parse_value(key, raw) for key, raw in layered.items()}
    kw.pop("problem", None)
    return default_config(problem, **kw)


def serialize_config(config: RunConfig) -> str:
    """Canonical flat text form; parse(serialize(c)) reproduces c bit-exactly."""
    lines = []
    for f in fields(RunConfig):
        value = getattr(config, f.name)
        if f.type == "tuple[float, ...]":
            value = ",".join(repr(v) for v in value)
        elif f.type == "float":
            value = repr(value)
        elif f.type == "bool":
            value = "true" if value else "false"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


# -- problem setups ----------------------------------------------------------


@dataclass(frozen=True)
class ProblemSetup:
    """Grid, operators and initial data for one bundled problem.

    The initial moments are kept in separable form
    u0 = ic_spatial @ ic_angular^T to avoid densifying large 2D states.
    """

    grid: Grid1D | Grid2D
    stencils: tuple[Stencils, ...]
    flux: tuple[FluxMatrices, ...]
    ic_spatial: np.ndarray
    ic_angular: np.ndarray
    B0: np.ndarray
    source: np.ndarray | None = None

    @property
    def n_moments(self) -> int:
        return self.flux[0].n_moments

    def dense_u0(self) -> np.ndarray:
        return self.ic_spatial @ self.ic_angular.T

    def lowrank_u0(self, r_start: int) -> LowRankState:
        return lowrank_from_factors(self.ic_spatial, self.ic_angular, r_start)


def _cutoff_gaussian(x: np.ndarray, center: float = 1.0, width: float = 0.03,
                     floor: float = 1e-4) -> np.ndarray:
    g = np.exp(-((x - center) ** 2) / (2.0 * width**2)) / math.sqrt(
        2.0 * math.pi * width**2
    )
    return np.maximum(floor, g)


def _warn_if_domain_small(config: RunConfig) -> None:
    half = 0.5 * (config.x_max - config.x_min)
    if config.t_end > half:
        warnings.warn(
            f"waves travel up to distance {config.t_end:g} but the half-domain "
            f"is only {half:g}; periodic wraparound will pollute the solution",
            stacklevel=3,
        )


def plane_source_setup(config: RunConfig) -> ProblemSetup:
    """Isotropic cutoff-Gaussian pulse, unit background internal energy."""
    _warn_if_domain_small(config)
    grid = Grid1D(config.n_x, config.x_min, config.x_max)
    flux = flux_matrices_1d(config.n_moments)
    ic = _cutoff_gaussian(grid.centers)
    angular = np.zeros((config.n_moments, 1))
    angular[0, 0] = 1.0
    return ProblemSetup(
        grid=grid,
        stencils=(build_stencils(grid),),
        flux=(flux,),
        ic_spatial=ic[:, None],
        ic_angular=angular,
        B0=np.ones(grid.n_cells),
    )


def su_olson_setup(config: RunConfig) -> ProblemSetup:
    """Plane-source pulse plus a unit source strip on [-0.5, 0.5], B0 = 50.

    The per-cell source is the exact overlap fraction of each cell with the
    strip, divided by the radiation constant.
    """
    setup = plane_source_setup(config)
    grid = setup.grid
    lo = grid.centers - 0.5 * grid.dx
    hi = grid.centers + 0.5 * grid.dx
    overlap = np.clip(np.minimum(hi, 0.5) - np.maximum(lo, -0.5), 0.0, None)
    source = overlap / grid.dx / config.a_rad
    return replace(setup, B0=np.full(grid.n_cells, 50.0), source=source)


BEAM_AMPLITUDE = 1e6
BEAM_SIGMA_X = 0.1
BEAM_SIGMA_OMEGA = 0.1
BEAM_OMEGA_STAR = 1.0 / math.sqrt(2.0)


def beam_2d_setup(config: RunConfig) -> ProblemSetup:
    """Gaussian beam in space and direction, streaming along (1,1)/sqrt(2)
    within the Omega_1-Omega_3 plane."""
    grid = Grid2D(
        Grid1D(config.n_x, config.x_min, config.x_max),
        Grid1D(config.n_y, config.y_min, config.y_max),
    )
    flux_x, flux_z = build_pn_flux_matrices_2d(config.n_pn)

    xy = grid.centers
    r_sq = xy[:, 0] ** 2 + xy[:, 1] ** 2
    spatial = BEAM_AMPLITUDE / (2.0 * math.pi * BEAM_SIGMA_X**2) * np.exp(
        -r_sq / (2.0 * BEAM_SIGMA_X**2)
    )

    # Project the angular Gaussian onto the harmonics; the quadrature is much
    # finer than the basis so the projection error is dominated by the basis
    # cutoff, not the nodes.
    n_polar = max(64, 2 * (config.n_pn + 2))
    mu, phi, w = sphere_quadrature(n_polar, 2 * n_polar)
    Y = real_sph_harm_basis(config.n_pn, mu, phi)
    omega_1 = np.sqrt(1.0 - mu**2) * np.cos(phi)
    g = np.exp(
        -((omega_1 - BEAM_OMEGA_STAR) ** 2 + (mu - BEAM_OMEGA_STAR) ** 2)
        / (2.0 * BEAM_SIGMA_OMEGA**2)
    ) / (2.0 * math.pi * BEAM_SIGMA_OMEGA**2)
    coeffs = Y.T @ (w * g)
    captured = float(np.sum(coeffs**2))
    g_norm = float(np.sum(w * g**2))
    if captured < 0.95 * g_norm:
        warnings.warn(
            f"P_{config.n_pn} basis captures only {100 * captured / g_norm:.1f}% "
            "of the beam's angular energy; increase n_pn to resolve the beam",
            stacklevel=2,
        )

    return ProblemSetup(
        grid=grid,
        stencils=build_stencils_2d(grid),
        flux=(flux_x, flux_z),
        ic_spatial=spatial[:, None],
        ic_angular=coeffs[:, None],
        B0=np.ones(grid.n_cells),
    )


_SETUPS = {
    "plane_source": plane_source_setup,
    "su_olson": su_olson_setup,
    "beam_2d": beam_2d_setup,
}


def make_setup(config: RunConfig) -> ProblemSetup:
    return _SETUPS[config.problem](config)
