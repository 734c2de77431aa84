"""Energy-stable, mass-conservative dynamical low-rank solvers for the
Su-Olson thermal radiative transfer system."""

from .angular import (
    FluxMatrices,
    abs_flux_matrix,
    build_flux_matrix,
    build_pn_flux_matrices_2d,
    flux_matrices_1d,
    legendre_eval,
)
from .diagnostics import History, scalar_flux, temperature, total_energy, total_mass
from .dlra import dlra_step
from .errors import ConfigError, NumericalBlowupError, RankOverflowError
from .full_solver import FullState, full_step
from .grids import Grid1D, Grid2D, Stencils, build_stencils, build_stencils_2d, \
    fourier_symbols
from .lowrank import LowRankState, factorize_moments, lowrank_from_factors
from .naive import CounterexampleSpec, build_counterexample, \
    counterexample_energy_increment, naive_step
from .problems import ProblemSetup, RunConfig, default_config, make_setup, \
    parse_config, serialize_config
from .runner import RunResult, run_dlra, run_full, run_naive, run_simulation
from .truncation import TruncationConfig, truncate_conservative, truncate_standard

__all__ = [
    "ConfigError",
    "CounterexampleSpec",
    "FluxMatrices",
    "FullState",
    "Grid1D",
    "Grid2D",
    "History",
    "LowRankState",
    "NumericalBlowupError",
    "ProblemSetup",
    "RankOverflowError",
    "RunConfig",
    "RunResult",
    "Stencils",
    "TruncationConfig",
    "abs_flux_matrix",
    "build_counterexample",
    "build_flux_matrix",
    "build_pn_flux_matrices_2d",
    "build_stencils",
    "build_stencils_2d",
    "counterexample_energy_increment",
    "default_config",
    "dlra_step",
    "factorize_moments",
    "flux_matrices_1d",
    "fourier_symbols",
    "full_step",
    "legendre_eval",
    "lowrank_from_factors",
    "make_setup",
    "naive_step",
    "parse_config",
    "run_dlra",
    "run_full",
    "run_naive",
    "run_simulation",
    "scalar_flux",
    "serialize_config",
    "temperature",
    "total_energy",
    "total_mass",
    "truncate_conservative",
    "truncate_standard",
]
