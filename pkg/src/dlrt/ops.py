"""Small shared helpers for the time-stepping kernels."""

from collections.abc import Sequence

import numpy as np

from .angular import FluxMatrices
from .errors import NumericalBlowupError
from .grids import Stencils


def as_dims(stencils, flux) -> tuple[tuple[Stencils, ...], tuple[FluxMatrices, ...]]:
    """Normalize (stencils, flux) to per-dimension tuples of equal length."""
    if isinstance(stencils, Stencils):
        stencils = (stencils,)
    else:
        stencils = tuple(stencils)
    if isinstance(flux, FluxMatrices):
        flux = (flux,)
    else:
        flux = tuple(flux)
    if len(stencils) != len(flux):
        raise ValueError(
            f"got {len(stencils)} stencil set(s) but {len(flux)} flux set(s)"
        )
    return stencils, flux


def transport_rhs(u: np.ndarray, stencils, flux) -> np.ndarray:
    """Stabilized streaming term sum_d(-Dx_d u A_d^T + Dxx_d u |A|_d^T)."""
    stencils, flux = as_dims(stencils, flux)
    out = np.zeros_like(u)
    for st, fl in zip(stencils, flux):
        out -= st.Dx @ (u @ fl.A.T)
        out += st.Dxx @ (u @ fl.A_abs.T)
    return out


def check_finite(arr: np.ndarray, what: str, step: int | None = None) -> None:
    if not np.all(np.isfinite(arr)):
        where = f" at step {step}" if step is not None else ""
        raise NumericalBlowupError(f"non-finite values in {what}{where}", step=step)


def min_dx(stencils: Sequence[Stencils] | Stencils) -> float:
    if isinstance(stencils, Stencils):
        return stencils.dx
    return min(st.dx for st in stencils)
