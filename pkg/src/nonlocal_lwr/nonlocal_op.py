"""Look-ahead nonlocal density: spatial and spatial-temporal variants.

The discrete nonlocal density at time step ``n`` and cell ``j`` is

    rho_d[n, j] = sum_{i=0}^{n_d-1} rho[n - i*nt_s, j + i] * eta[i] * dx

with nt_s = floor(gamma * dx / dt) time steps of look-back per cell of
look-ahead. gamma = 0 gives nt_s = 0 and reduces bit-for-bit to the
purely spatial convolution.

The operator only reads data that already exists in the field (collar
rows/columns included); it never extrapolates. Boundary policy lives in
the boundary module.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OutOfCollarError
from .grid import DensityField
from .kernels import DiscreteKernel


@dataclass(frozen=True)
class DelaySpec:
    """Propagation delay gamma (s/ft) and its per-cell step offset nt_s."""

    gamma: float
    nt_s: int


NO_DELAY = DelaySpec(0.0, 0)


def make_delay(gamma: float, dx: float, dt: float,
               warn_degenerate: bool = True) -> DelaySpec:
    """Build a DelaySpec with nt_s = floor(gamma * dx / dt).

    When gamma > 0 but the delay is under-resolved by dt (nt_s == 0) the
    operator silently degenerates to the spatial model; a warning states
    the dt that would resolve the delay.
    """
    if gamma < 0:
        raise DomainError(f"require gamma >= 0, got {gamma}")
    nt_s = int(math.floor(gamma * dx / dt))
    if gamma > 0 and nt_s == 0 and warn_degenerate:
        warnings.warn(
            f"delay gamma={gamma} under-resolved: nt_s = "
            f"floor(gamma*dx/dt) = 0, the model degenerates to the "
            f"spatial nonlocal form; need dt <= {gamma * dx} to resolve it",
            stacklevel=2)
    return DelaySpec(float(gamma), nt_s)


def _check_stencil(field: DensityField, step: int, j_lo: int, j_hi: int,
                   n_d: int, nt_s: int) -> int:
    """Validate stencil bounds; returns the array row for `step`."""
    rows, cols = field.values.shape
    r = field.grid.collar_time + step
    if r < 0 or r >= rows:
        raise OutOfCollarError(f"time step {step} outside field rows")
    if r - (n_d - 1) * nt_s < 0:
        raise OutOfCollarError(
            f"temporal stencil at step {step} reaches below the collar "
            f"(need {(n_d - 1) * nt_s - r} more past rows)")
    if j_lo < 0 or j_hi - 1 + n_d - 1 >= cols:
        raise OutOfCollarError(
            f"spatial stencil [{j_lo}, {j_hi - 1 + n_d - 1}] outside "
            f"{cols} columns")
    return r


def nonlocal_density_spacetime(field: DensityField, step: int, j: int,
                               dk: DiscreteKernel,
                               delay: DelaySpec) -> float:
    """rho_d at one cell, sampling past rows i*nt_s steps back."""
    r = _check_stencil(field, step, j, j + 1, dk.n_d, delay.nt_s)
    v = field.values
    p = dk.probs
    acc = 0.0
    for i in range(dk.n_d):
        acc += v[r - i * delay.nt_s, j + i] * p[i]
    return acc


def nonlocal_density_spatial(field: DensityField, step: int, j: int,
                             dk: DiscreteKernel) -> float:
    """Purely spatial rho_d; equals the spacetime form with gamma = 0."""
    return nonlocal_density_spacetime(field, step, j, dk, NO_DELAY)


def nonlocal_density_row(field: DensityField, step: int, dk: DiscreteKernel,
                         delay: DelaySpec, j_start: int,
                         j_stop: int) -> np.ndarray:
    """Vectorized sweep over one time row, elementwise equal to the
    per-cell calls (same accumulation order)."""
    if j_stop <= j_start:
        return np.zeros(0)
    r = _check_stencil(field, step, j_start, j_stop, dk.n_d, delay.nt_s)
    v = field.values
    p = dk.probs
    out = np.zeros(j_stop - j_start)
    for i in range(dk.n_d):
        out += v[r - i * delay.nt_s, j_start + i:j_stop + i] * p[i]
    return out
