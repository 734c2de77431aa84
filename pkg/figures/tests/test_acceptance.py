"""Regenerate every figure kind from real solver output.

Drives the installed ``dlrt`` CLI (the solver's external interface) at desk
scale, then renders all five figure kinds from the CSVs it wrote.
"""

import shutil
import subprocess

import pytest

from dlrt_figures import FigureSpec, render

pytestmark = pytest.mark.skipif(
    shutil.which("dlrt") is None, reason="dlrt CLI not installed"
)


def run_solver(out_dir, solver, *extra):
    cmd = [
        "dlrt", "--problem", "plane_source", "--solver", solver,
        "--output-dir", str(out_dir), "--quiet",
        "--set", "n_x=128", "--set", "n_moments=32", "--set", "t_end=2.0",
        "--set", "theta_rel=0.01", "--set", "r_start=8", "--set", "r_max=24",
        "--set", "emit_fxmu=true",
    ] + list(extra)
    subprocess.run(cmd, check=True, capture_output=True, text=True)


@pytest.fixture(scope="module")
def desk_runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("runs")
    run_solver(base / "full", "full")
    run_solver(base / "dlra", "dlra")
    beam = [
        "dlrt", "--problem", "beam_2d", "--solver", "dlra",
        "--output-dir", str(base / "beam"), "--quiet",
        "--set", "n_x=24", "--set", "n_y=24", "--set", "n_pn=3",
        "--set", "t_end=0.2", "--set", "r_start=5", "--set", "r_max=16",
        "--set", "theta_rel=0.01",
    ]
    subprocess.run(beam, check=True, capture_output=True, text=True)
    return base


def test_all_five_kinds_render(desk_runs, tmp_path):
    full = desk_runs / "full"
    dlra = desk_runs / "dlra"
    beam = desk_runs / "beam"
    figures = [
        FigureSpec("heatmap_1d", (str(dlra / "fxmu_000.csv"),),
                   str(tmp_path / "fxmu.png")),
        FigureSpec("profiles",
                   (str(full / "snapshot_000.csv"), str(dlra / "snapshot_000.csv")),
                   str(tmp_path / "profiles.png")),
        FigureSpec("rank_history", (str(dlra / "history.csv"),),
                   str(tmp_path / "rank.png")),
        FigureSpec("mass_error",
                   (str(full / "history.csv"), str(dlra / "history.csv")),
                   str(tmp_path / "mass.png")),
        FigureSpec("heatmap_2d", (str(beam / "snapshot_000.csv"),),
                   str(tmp_path / "beam.png")),
    ]
    for spec in figures:
        out = render(spec)
        assert out.exists() and out.stat().st_size > 0
    print("PASS: all five figure kinds rendered from desk-scale solver output")
