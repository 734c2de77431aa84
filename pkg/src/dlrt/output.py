"""CSV serialization for snapshots and run histories.

Formatting is deterministic: 17 significant digits, '.' decimal separator,
'\\n' line endings and a header row, so files round-trip bit-exactly.
2D snapshots may be gzipped by giving the path a .gz suffix.
"""

import gzip
from pathlib import Path

import numpy as np

from .diagnostics import HISTORY_COLUMNS, History

SNAPSHOT_1D_COLUMNS = ("x", "phi", "T", "B")
SNAPSHOT_2D_COLUMNS = ("x1", "x2", "phi", "T")
FXMU_COLUMNS = ("x", "mu", "f")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _open_text(path, mode: str):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", newline="\n")
    return open(path, mode, newline="\n")


def _write_table(path, columns, arrays) -> None:
    arrays = [np.asarray(a, dtype=float) for a in arrays]
    n = arrays[0].size
    if any(a.size != n for a in arrays):
        raise ValueError("column length mismatch")
    with _open_text(path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for i in range(n):
            fh.write(",".join(_fmt(a[i]) for a in arrays) + "\n")


def _read_table(path, columns):
    with _open_text(path, "r") as fh:
        header = fh.readline().strip()
        if header.split(",") != list(columns):
            raise ValueError(
                f"{path}: expected header {','.join(columns)!r}, got {header!r}"
            )
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        data = data.reshape(0, len(columns))
    return tuple(data[:, k] for k in range(len(columns)))


def write_snapshot_1d(path, x, phi, T, B) -> None:
    _write_table(path, SNAPSHOT_1D_COLUMNS, [x, phi, T, B])


def read_snapshot_1d(path):
    return _read_table(path, SNAPSHOT_1D_COLUMNS)


def write_snapshot_2d(path, x1, x2, phi, T) -> None:
    _write_table(path, SNAPSHOT_2D_COLUMNS, [x1, x2, phi, T])


def read_snapshot_2d(path):
    return _read_table(path, SNAPSHOT_2D_COLUMNS)


def write_fxmu(path, x, mu, f) -> None:
    """Angularly reconstructed solution in long format, one row per (x, mu)."""
    _write_table(path, FXMU_COLUMNS, [x, mu, f])


def read_fxmu(path):
    return _read_table(path, FXMU_COLUMNS)


def write_history(path, history: History) -> None:
    _write_table(
        path,
        HISTORY_COLUMNS,
        [history.t, history.rank, history.mass, history.energy,
         history.rel_mass_err, history.wall_s],
    )


def read_history(path) -> History:
    cols = _read_table(path, HISTORY_COLUMNS)
    out = History()
    for row in zip(*cols):
        out.append(*row)
    return out
