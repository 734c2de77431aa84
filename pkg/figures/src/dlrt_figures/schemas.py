"""Readers for the solver's CSV output schemas.

These parse the documented column layouts only; no physics is recomputed
here.  Schema violations raise SchemaError naming the offending column.
"""

import gzip
from pathlib import Path

import numpy as np

HISTORY = ("t", "rank", "mass", "energy", "rel_mass_err", "wall_s")
SNAPSHOT_1D = ("x", "phi", "T", "B")
SNAPSHOT_2D = ("x1", "x2", "phi", "T")
FXMU = ("x", "mu", "f")


class SchemaError(ValueError):
    pass


def _open_text(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rt")
    return open(path, "r")


def read_table(path, columns):
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"input file not found: {path}")
    with _open_text(path) as fh:
        header = fh.readline().strip().split(",")
        for col in columns:
            if col not in header:
                raise SchemaError(f"{path}: missing column {col!r} "
                                  f"(expected {','.join(columns)})")
        for col in header:
            if col not in columns:
                raise SchemaError(f"{path}: unexpected column {col!r} "
                                  f"(expected {','.join(columns)})")
        if tuple(header) != tuple(columns):
            raise SchemaError(f"{path}: column order {header} does not match "
                              f"{list(columns)}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        raise SchemaError(f"{path}: no data rows")
    return {name: data[:, i] for i, name in enumerate(columns)}


def read_history(path):
    return read_table(path, HISTORY)


def read_snapshot_1d(path):
    return read_table(path, SNAPSHOT_1D)


def read_snapshot_2d(path):
    return read_table(path, SNAPSHOT_2D)


def read_fxmu(path):
    return read_table(path, FXMU)
