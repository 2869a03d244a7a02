"""Collar construction for the three boundary-data strategies.

* continuous:  thin data rho(0, x) and rho(t, b) are continuously
  extended backward in time (width gamma*d) and forward in space
  (width d); the corner block is the constant rho(0, b).
* known_thick: the solution is prescribed on the L-shaped region
  [0, gamma*d) x [a, b] union [gamma*d, T] x [b-d, b]; the effective
  interior is (gamma*d, T) x (a, b-d).
* variable:    no collar at all; the kernel support at (t, x) is
  min{d, distance to x=b, elapsed time / gamma}, floored at one cell
  (where the model is evaluated locally).

Collars exist only behind t = 0 and ahead of x = b: the temporal
interaction is strictly retrospective and the spatial interaction is
pure look-ahead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CoverageError, DomainError, ShapeError
from .grid import DensityField, Grid
from .kernels import DiscreteKernel, make_kernel, sample

CONTINUOUS = "continuous"
KNOWN_THICK = "known_thick"
VARIABLE = "variable"

STRATEGIES = (CONTINUOUS, KNOWN_THICK, VARIABLE)


@dataclass(frozen=True)
class BoundaryStrategy:
    tag: str
    d: float
    gamma: float

    def __post_init__(self):
        if self.tag not in STRATEGIES:
            raise DomainError(f"unknown boundary strategy {self.tag!r}")


def band_counts(grid: Grid, d: float, gamma: float) -> tuple[int, int]:
    """(spatial band cells, temporal band steps) covering d and gamma*d."""
    n_band = int(round(d / grid.dx))
    nt_band = int(round(gamma * d / grid.dt))
    return n_band, nt_band


def extend_continuous(field: DensityField, initial_row: np.ndarray,
                      right_boundary: np.ndarray) -> None:
    """Fill the collar by continuous extension of thin data.

    Temporal collar rows copy the initial row, spatial collar columns
    copy the per-step boundary value, and the corner block is the
    constant rho(0, b). Idempotent: re-extending changes nothing.
    """
    g = field.grid
    initial_row = np.asarray(initial_row, dtype=float)
    right_boundary = np.asarray(right_boundary, dtype=float)
    if initial_row.shape != (g.n,):
        raise ShapeError(
            f"initial row has {initial_row.shape}, expected ({g.n},)")
    if right_boundary.shape != (g.n_t + 1,):
        raise ShapeError(
            f"boundary column has {right_boundary.shape}, "
            f"expected ({g.n_t + 1},)")
    ct, n = g.collar_time, g.n
    # past-time rows: rho(t, x) = rho(0, x)
    field.values[:ct, :n] = initial_row
    # downstream columns: rho(t, x) = rho(t, b)
    field.values[ct:, n:] = right_boundary[:, None]
    # corner block: rho(t, x) = rho(0, b)
    field.values[:ct, n:] = right_boundary[0]


def known_thick_region_mask(grid: Grid, d: float, gamma: float) -> np.ndarray:
    """Boolean mask over the interior (n_t+1, n) selecting the L-shaped
    prescribed region of the known-thick strategy."""
    n_band, nt_band = band_counts(grid, d, gamma)
    mask = np.zeros((grid.n_t + 1, grid.n), dtype=bool)
    mask[:nt_band, :] = True
    if n_band > 0:
        mask[:, grid.n - n_band:] = True
    return mask


def install_known_thick(field: DensityField, thick_data: np.ndarray,
                        d: float, gamma: float) -> np.ndarray:
    """Overwrite the L-shaped prescribed region with data.

    ``thick_data`` is an (n_t+1, n) array; cells outside the region may
    be NaN. Returns the boolean mask of the effective interior
    (gamma*d, T) x (a, b-d). Raises CoverageError if any region cell
    lacks data.
    """
    g = field.grid
    thick_data = np.asarray(thick_data, dtype=float)
    if thick_data.shape != (g.n_t + 1, g.n):
        raise ShapeError(
            f"thick data has {thick_data.shape}, expected "
            f"({g.n_t + 1}, {g.n})")
    region = known_thick_region_mask(g, d, gamma)
    if np.any(~np.isfinite(thick_data[region])):
        missing = int(np.sum(~np.isfinite(thick_data[region])))
        raise CoverageError(
            f"{missing} cells of the prescribed L-region lack data")
    field.interior[region] = thick_data[region]
    return ~region


def effective_length(d: float, d_x: float, d_t: float, gamma: float,
                     dx_floor: float) -> float:
    """Variable-length kernel support min{d, d_x, d_t/gamma}, floored at
    one grid cell (where the model degenerates to the local one).

    gamma = 0 makes the temporal term infinite by convention.
    """
    if min(d, d_x, d_t) < 0 or gamma < 0:
        raise DomainError("effective_length arguments must be >= 0")
    temporal = math.inf if gamma == 0 else d_t / gamma
    return max(min(d, d_x, temporal), dx_floor)


@lru_cache(maxsize=4096)
def _variable_kernel_cached(family: str, d_eff: float, dx: float,
                            base_d: float, mode: str) -> DiscreteKernel:
    if mode == "rescale":
        return sample(make_kernel(family, d_eff), dx)
    # truncate the fixed-length shape to [0, d_eff] and renormalize
    base = make_kernel(family, base_d)
    n_d = max(int(round(d_eff / dx)), 1)
    raw = base(np.arange(n_d) * dx)
    total = float(np.sum(raw))
    if total <= 0:
        raise DomainError("truncated kernel has zero mass")
    probs = raw / total
    dk = DiscreteKernel(weights=probs / dx, dx=float(dx))
    object.__setattr__(dk, "_probs", probs)
    return dk


def variable_kernel_at(family: str, d_eff: float, dx: float,
                       base_d: float | None = None,
                       mode: str = "rescale") -> DiscreteKernel:
    """Discrete kernel for a cell with effective support d_eff.

    Default mode rescales the family shape onto [0, d_eff], which keeps
    the weights non-increasing and makes the one-cell limit exact; the
    "truncate" mode instead cuts the fixed-length shape at d_eff and
    renormalizes, kept for comparison.
    """
    if d_eff < dx:
        raise DomainError(f"d_eff={d_eff} below one cell width {dx}")
    if mode not in ("rescale", "truncate"):
        raise DomainError(f"unknown variable-kernel mode {mode!r}")
    return _variable_kernel_cached(family, float(d_eff), float(dx),
                                   float(base_d or d_eff), mode)
