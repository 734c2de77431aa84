"""Figure rendering from solver CSVs.

Five figure kinds mirror the reference layouts: the f(x, mu) heatmap, scalar
flux and temperature wave profiles (reference vs low-rank), rank-in-time,
relative-mass-error-in-time, and 2D flux/temperature heatmaps.  Rendering
never recomputes physics; it visualizes solver output as-is.  Paired heatmap
panels share one color scale so the methods stay visually comparable.
"""

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .schemas import SchemaError, read_fxmu, read_history, read_snapshot_1d, \
    read_snapshot_2d

KINDS = ("heatmap_1d", "profiles", "rank_history", "mass_error", "heatmap_2d")

FIGSIZE = (9.0, 4.0)
DPI = 110


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; choose from {KINDS}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")


def _labels(n):
    return ["reference", "low-rank"][:n] if n <= 2 else [f"run {i}" for i in range(n)]


def build_heatmap_1d(spec):
    table = read_fxmu(spec.inputs[0])
    x = np.unique(table["x"])
    mu = np.unique(table["mu"])
    f = table["f"].reshape(len(x), len(mu))
    fig, ax = plt.subplots(figsize=FIGSIZE)
    mesh = ax.pcolormesh(x, mu, f.T, shading="nearest", cmap="inferno")
    fig.colorbar(mesh, ax=ax, label="f(x, mu)")
    ax.set_xlabel("x")
    ax.set_ylabel("mu")
    return fig


def build_profiles(spec):
    tables = [read_snapshot_1d(p) for p in spec.inputs]
    labels = _labels(len(tables))
    fig, (ax_phi, ax_t) = plt.subplots(1, 2, figsize=FIGSIZE)
    styles = ["-", "--", ":", "-."]
    for table, label, style in zip(tables, labels, styles):
        ax_phi.plot(table["x"], table["phi"], style, label=label)
        ax_t.plot(table["x"], table["T"], style, label=label)
    ax_phi.set_xlabel("x")
    ax_phi.set_ylabel("scalar flux")
    ax_t.set_xlabel("x")
    ax_t.set_ylabel("temperature")
    ax_phi.legend()
    fig.tight_layout()
    return fig


def build_rank_history(spec):
    tables = [read_history(p) for p in spec.inputs]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for table, label in zip(tables, _labels(len(tables))):
        ax.step(table["t"], table["rank"], where="post", label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("rank")
    ax.set_ylim(bottom=0)
    if len(tables) > 1:
        ax.legend()
    return fig


def build_mass_error(spec):
    tables = [read_history(p) for p in spec.inputs]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    floor = 1e-17  # zeros (the t = 0 row) would vanish from the log axis
    for table, label in zip(tables, _labels(len(tables))):
        ax.semilogy(table["t"], np.maximum(table["rel_mass_err"], floor), label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("relative mass error")
    if len(tables) > 1:
        ax.legend()
    return fig


def build_heatmap_2d(spec):
    tables = [read_snapshot_2d(p) for p in spec.inputs]
    labels = _labels(len(tables))
    fig, axes = plt.subplots(2, len(tables), figsize=(FIGSIZE[0], 7.0), squeeze=False)
    # shared scales per row keep reference/low-rank pairs comparable
    phi_lo = min(np.min(t["phi"]) for t in tables)
    phi_hi = max(np.max(t["phi"]) for t in tables)
    t_lo = min(np.min(t["T"]) for t in tables)
    t_hi = max(np.max(t["T"]) for t in tables)
    for col, (table, label) in enumerate(zip(tables, labels)):
        x1 = np.unique(table["x1"])
        x2 = np.unique(table["x2"])
        rows = (("phi", phi_lo, phi_hi, "scalar flux"), ("T", t_lo, t_hi, "temperature"))
        for row, (field, lo, hi, name) in enumerate(rows):
            grid = table[field].reshape(len(x1), len(x2))
            ax = axes[row][col]
            mesh = ax.pcolormesh(
                x1, x2, grid.T, shading="nearest", cmap="inferno", vmin=lo, vmax=hi
            )
            fig.colorbar(mesh, ax=ax, label=name)
            ax.set_title(label)
            ax.set_xlabel("x1")
            ax.set_ylabel("x2")
    fig.tight_layout()
    return fig


BUILDERS = {
    "heatmap_1d": build_heatmap_1d,
    "profiles": build_profiles,
    "rank_history": build_rank_history,
    "mass_error": build_mass_error,
    "heatmap_2d": build_heatmap_2d,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written image path."""
    fig = BUILDERS[spec.kind](spec)
    out = Path(spec.output)
    if str(out.parent) not in ("", "."):
        out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out
