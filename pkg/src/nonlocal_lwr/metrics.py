"""Relative L2 reconstruction error over a space-time region.

    er = sum (rho_recon - rho_known)^2 / sum (rho_known)^2

summed over masked interior cells. For the known-thick strategy the mask
is restricted to the unknown region (rows past the temporal band,
columns left of the spatial band); numerator and denominator are always
recomputed on the mask, never rescaled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError, ShapeError
from .grid import DensityField


@dataclass(frozen=True)
class ErrorReport:
    er: float
    region: str
    clamp_count: int = 0


def _compatible(a: DensityField, b: DensityField) -> None:
    ga, gb = a.grid, b.grid
    if (ga.a, ga.b, ga.n, ga.dt, ga.n_t) != (gb.a, gb.b, gb.n, gb.dt, gb.n_t):
        raise ShapeError("fields do not share a grid")


def relative_l2(recon: DensityField, known: DensityField,
                mask: np.ndarray | None = None,
                clamp_count: int = 0,
                region: str = "interior") -> ErrorReport:
    """Relative L2 error of `recon` against `known` on the masked
    interior; `mask` defaults to the full interior."""
    _compatible(recon, known)
    r = recon.interior
    k = known.interior
    if mask is None:
        mask = np.ones(k.shape, dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != k.shape:
        raise ShapeError(f"mask shape {mask.shape} != interior {k.shape}")
    if not mask.any():
        raise DomainError("empty mask")
    num = float(np.sum((r[mask] - k[mask]) ** 2))
    den = float(np.sum(k[mask] ** 2))
    if den == 0.0:
        raise DegenerateError("reference field has zero mass on the region")
    return ErrorReport(er=num / den, region=region, clamp_count=clamp_count)
