"""Time-stepping driver shared by the full, dlra and naive solvers.

The step size is dt = CFL * dx, with individual steps shortened so the run
lands exactly on every requested snapshot time and on t_end.  Mass, energy
and rank are recorded once per step; snapshots and the history table are
written as CSV when an output directory is configured.
"""

import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .angular import legendre_vandermonde
from .diagnostics import History, scalar_flux, temperature, total_energy, total_mass
from .dlra import dlra_step
from .full_solver import FullState, full_step
from .grids import Grid1D
from .lowrank import LowRankState
from .naive import naive_step
from .ops import min_dx
from .problems import ProblemSetup, RunConfig, make_setup
from .truncation import TruncationConfig
from . import output as csvout


@dataclass
class RunResult:
    config: RunConfig
    setup: ProblemSetup
    state: FullState | LowRankState
    B: np.ndarray
    history: History
    outputs: dict[str, Path] = field(default_factory=dict)
    local_conservation: list[float] | None = None


def _zeroth_flux_divergence(u_state, setup: ProblemSetup) -> np.ndarray:
    """Streaming contribution to the zeroth moment, (Dx u A^T - Dxx u |A|^T)_j0."""
    out = np.zeros(setup.grid.n_cells)
    for st, fl in zip(setup.stencils, setup.flux):
        if isinstance(u_state, LowRankState):
            col_a = u_state.X @ (u_state.S @ (u_state.V.T @ fl.A[:, 0]))
            col_abs = u_state.X @ (u_state.S @ (u_state.V.T @ fl.A_abs[:, 0]))
        else:
            col_a = u_state.u @ fl.A[:, 0]
            col_abs = u_state.u @ fl.A_abs[:, 0]
        out += st.Dx @ col_a
        out -= st.Dxx @ col_abs
    return out


def run_simulation(config: RunConfig, track_conservation: bool = False) -> RunResult:
    """Run the configured problem/solver to t_end and emit outputs."""
    config.validate()
    setup = make_setup(config)
    dt_base = config.cfl * min_dx(setup.stencils)
    trunc = TruncationConfig(
        theta_rel=config.theta_rel, r_min=1, r_max=config.r_max
    )

    if config.solver == "full":
        state = FullState(setup.dense_u0(), setup.B0.copy())
        B = state.B
        rank_of = lambda s: min(s.u.shape)
        energy_of = lambda s: total_energy(s.u, s.B)
        mass_of = lambda s: total_mass(s.u, s.B, setup.grid)
    else:
        r_cap = min(setup.grid.n_cells, setup.n_moments)
        state = setup.lowrank_u0(min(config.r_start, r_cap))
        B = setup.B0.copy()
        rank_of = lambda s: s.rank
        energy_of = lambda s: total_energy(s, B)
        mass_of = lambda s: total_mass(s, B, setup.grid)

    history = History()
    m0 = mass_of(state)
    t_start = time.perf_counter()
    history.append(0.0, rank_of(state), m0, energy_of(state), 0.0, 0.0)
    conservation: list[float] | None = [] if track_conservation else None

    targets = sorted(set(float(t) for t in config.snapshot_times) | {config.t_end})
    outputs: dict[str, Path] = {}
    out_dir = Path(config.output_dir) if config.output_dir else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)

    t = 0.0
    step = 0
    eps = 1e-12 * max(1.0, config.t_end)
    for i_snap, target in enumerate(targets):
        while t < target - eps:
            dt = min(dt_base, target - t)
            if track_conservation:
                phi_old = scalar_flux(state if config.solver != "full" else state.u)
                flux_div = _zeroth_flux_divergence(state, setup)

            step += 1
            if config.solver == "full":
                state = full_step(
                    state, setup.stencils, setup.flux, config.sigma, dt,
                    source=setup.source, step=step,
                )
                B = state.B
            elif config.solver == "dlra":
                state, B = dlra_step(
                    state, B, setup.stencils, setup.flux, config.sigma, dt,
                    trunc, source=setup.source,
                    conservative=config.truncation == "conservative",
                    allow_large_dt=config.allow_cfl_violation, step=step,
                )
            else:
                state, B = naive_step(
                    state, B, setup.stencils, setup.flux, config.sigma, dt,
                    trunc, step=step,
                )
            t = min(state.t, target)

            if track_conservation:
                phi_new = scalar_flux(state if config.solver != "full" else state.u)
                res = phi_new - phi_old + dt * flux_div \
                    - config.sigma * dt * (B - phi_new)
                if setup.source is not None:
                    res -= dt * setup.source
                conservation.append(float(np.max(np.abs(res))))

            mass = mass_of(state)
            history.append(
                t, rank_of(state), mass, energy_of(state),
                abs(m0 - mass) / abs(m0) if m0 != 0 else abs(mass),
                time.perf_counter() - t_start,
            )
        if out_dir is not None:
            _emit_snapshot(out_dir, i_snap, config, setup, state, B, outputs)

    if out_dir is not None:
        hist_path = out_dir / "history.csv"
        csvout.write_history(hist_path, history)
        outputs["history"] = hist_path

    return RunResult(config, setup, state, B, history, outputs, conservation)


def _emit_snapshot(out_dir, index, config, setup, state, B, outputs) -> None:
    phi = scalar_flux(state if config.solver != "full" else state.u)
    T = temperature(B, config.a_rad)
    if isinstance(setup.grid, Grid1D):
        path = out_dir / f"snapshot_{index:03d}.csv"
        csvout.write_snapshot_1d(path, setup.grid.centers, phi, T, B)
        if config.emit_fxmu:
            fpath = out_dir / f"fxmu_{index:03d}.csv"
            _emit_fxmu(fpath, config, setup, state)
            outputs[f"fxmu_{index:03d}"] = fpath
    else:
        path = out_dir / f"snapshot_{index:03d}.csv"
        xy = setup.grid.centers
        csvout.write_snapshot_2d(path, xy[:, 0], xy[:, 1], phi, T)
    outputs[f"snapshot_{index:03d}"] = path


def _emit_fxmu(path, config, setup, state, n_mu: int = 129) -> None:
    """Reconstruct f(x, mu) on a uniform direction grid (1D only)."""
    mu = np.linspace(-1.0, 1.0, n_mu)
    P = legendre_vandermonde(setup.n_moments, mu)
    u = state.densify() if isinstance(state, LowRankState) else state.u
    f = u @ P.T
    x = setup.grid.centers
    xg, mug = np.meshgrid(x, mu, indexing="ij")
    csvout.write_fxmu(path, xg.ravel(), mug.ravel(), f.ravel())


def run_full(config: RunConfig, **kw) -> RunResult:
    return run_simulation(_with_solver(config, "full"), **kw)


def run_dlra(config: RunConfig, **kw) -> RunResult:
    return run_simulation(_with_solver(config, "dlra"), **kw)


def run_naive(config: RunConfig, **kw) -> RunResult:
    return run_simulation(_with_solver(config, "naive"), **kw)


def _with_solver(config: RunConfig, solver: str) -> RunConfig:
    return config if config.solver == solver else replace(config, solver=solver)
