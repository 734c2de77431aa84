import numpy as np
import pytest


def write_csv(path, columns, rows):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format(float(v), ".17g") for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def history_csv(tmp_path):
    rows = [
        (0.0, 5, 1.0, 2.0, 0.0, 0.0),
        (0.5, 7, 1.0, 1.9, 1e-14, 0.1),
        (1.0, 6, 1.0, 1.8, 1e-14, 0.2),
    ]
    return write_csv(tmp_path / "history.csv",
                     ("t", "rank", "mass", "energy", "rel_mass_err", "wall_s"), rows)


@pytest.fixture
def snapshot_1d_csv(tmp_path):
    x = np.linspace(-1, 1, 16)
    phi = np.exp(-(x**2) * 4)
    rows = list(zip(x, phi, np.sqrt(phi), phi**2))
    return write_csv(tmp_path / "snap.csv", ("x", "phi", "T", "B"), rows)


@pytest.fixture
def snapshot_2d_csv(tmp_path):
    x = np.linspace(-1, 1, 6)
    rows = []
    for x1 in x:
        for x2 in x:
            phi = np.exp(-(x1**2 + x2**2))
            rows.append((x1, x2, phi, phi**0.25))
    return write_csv(tmp_path / "snap2d.csv", ("x1", "x2", "phi", "T"), rows)


@pytest.fixture
def fxmu_csv(tmp_path):
    x = np.linspace(-1, 1, 8)
    mu = np.linspace(-1, 1, 5)
    rows = []
    for xi in x:
        for mui in mu:
            rows.append((xi, mui, np.exp(-(xi - mui) ** 2)))
    return write_csv(tmp_path / "fxmu.csv", ("x", "mu", "f"), rows)
