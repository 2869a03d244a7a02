"""Adapted Lax-Friedrichs stepper for local and nonlocal LWR models.

The update at interior cell j is

    rho[n+1, j] = (rho[n, j+1] + rho[n, j-1]) / 2
                  - (dt / 2 dx) * (F[n, j+1] - F[n, j-1])

with F[n, j] = rho[n, j] * v(rho_d[n, j]) and rho_d the look-ahead
nonlocal density (rho_d = rho for the classical model). The nonlocal
density is used at both stencil points, giving a symmetric consistent
discretization of d/dx [rho v(rho_d)].

Boundary values are imposed strongly (overwritten after the update), as
in the reconstruction experiments where boundary rows/columns are data.
The left ghost cell uses zeroth-order extrapolation rho[n, -1] =
rho[n, 0] unless a left-boundary series is supplied.

Models: "classical" (no kernel), "spatial" (gamma = 0), "spacetime"
(gamma > 0). A periodic test mode (stencil and convolution wrap around)
exists solely for conservation and convergence checks; it is limited to
gamma = 0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import boundary as bd
from . import diagrams as fdm
from . import kernels as kn
from .errors import (
    CFLError,
    CoverageError,
    DomainError,
    OutOfCollarError,
    ShapeError,
)
from .grid import DensityField, Grid, make_grid
from .nonlocal_op import NO_DELAY, DelaySpec, make_delay

CLASSICAL = "classical"
SPATIAL = "spatial"
SPACETIME = "spacetime"
MODELS = (CLASSICAL, SPATIAL, SPACETIME)


@dataclass
class Scenario:
    """One solver run: model, data, and all numerical parameters.

    ``grid`` describes the interior; the solver allocates whatever
    collar the boundary strategy needs. ``truth`` (interior-shaped
    array) is required by the known-thick strategy and optional
    otherwise.
    """

    grid: Grid
    fd: fdm.FundamentalDiagram
    model: str
    initial: np.ndarray
    boundary: np.ndarray | None = None
    kernel: kn.Kernel | None = None
    gamma: float = 0.0
    strategy: str = bd.CONTINUOUS
    left_boundary: np.ndarray | None = None
    truth: np.ndarray | None = None
    periodic: bool = False
    variable_mode: str = "rescale"

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}")
        if self.model == CLASSICAL and self.kernel is not None:
            raise DomainError("classical model takes no kernel")
        if self.model != CLASSICAL and self.kernel is None:
            raise DomainError(f"{self.model} model requires a kernel")
        if self.model == SPATIAL and self.gamma != 0.0:
            raise DomainError("spatial model requires gamma = 0")
        if self.model == SPACETIME and self.gamma < 0.0:
            raise DomainError("spacetime model requires gamma >= 0")
        if self.strategy not in bd.STRATEGIES:
            raise DomainError(f"unknown strategy {self.strategy!r}")
        if self.periodic and self.gamma != 0.0:
            raise DomainError("periodic test mode supports gamma = 0 only")


@dataclass
class RunResult:
    field: DensityField
    clamp_count: int
    cfl: float
    gamma_max: float | None = None
    interior_mask: np.ndarray | None = None


def cfl_check(fd: fdm.FundamentalDiagram, grid: Grid) -> float:
    """CFL number lambda = sup|f'| * dt / dx; raises CFLError if > 1.

    For Greenshields (local and nonlocal alike) the bound is v_f, since
    the nonlocal flux derivative d/d rho [rho v(rho_d)] = v(rho_d) lies
    in [0, v_f].
    """
    lam = fdm.char_speed_sup(fd) * grid.dt / grid.dx
    if lam > 1.0:
        raise CFLError(
            f"CFL number {lam:.4g} > 1 (dt={grid.dt}, dx={grid.dx})")
    return lam


def _clip_counted(arr: np.ndarray) -> int:
    bad = int(np.count_nonzero((arr < 0.0) | (arr > 1.0)))
    np.clip(arr, 0.0, 1.0, out=arr)
    return bad


def lf_step_classical(row_ext: np.ndarray, fd: fdm.FundamentalDiagram,
                      grid: Grid) -> np.ndarray:
    """One LF step of the classical model on a row with ghost values at
    both ends; returns the clamped updates for the interior cells."""
    row_ext = np.asarray(row_ext, dtype=float)
    lam = grid.dt / grid.dx
    F = row_ext * fdm.velocity(fd, row_ext)
    new = (0.5 * (row_ext[2:] + row_ext[:-2])
           - 0.5 * lam * (F[2:] - F[:-2]))
    _clip_counted(new)
    return new


def _rho_d_extended(values: np.ndarray, r: int, nt_s: int,
                    probs: np.ndarray, j_up: int) -> np.ndarray:
    """Nonlocal density at columns -1..j_up of time row r, with the
    ghost column -1 taking each accessed row's column-0 value."""
    out = np.zeros(j_up + 2)
    seg = np.empty(j_up + 2)
    for i, p in enumerate(probs):
        row = values[r - i * nt_s]
        if i == 0:
            seg[0] = row[0]
            seg[1:] = row[:j_up + 1]
        else:
            seg[:] = row[i - 1:i + j_up + 1]
        out += seg * p
    return out


def _advance_fixed(values: np.ndarray, r: int, fd, lam: float, j_up: int,
                   probs: np.ndarray | None, nt_s: int) -> tuple[np.ndarray, int]:
    """Compute the LF update for columns 0..j_up-1 of row r+1.

    ``probs`` is None for the classical (local) model.
    """
    if probs is not None and nt_s > 0 and r - (len(probs) - 1) * nt_s < 0:
        raise OutOfCollarError(
            f"temporal stencil at row {r} reaches below the collar")
    row = values[r]
    rho_ext = np.empty(j_up + 2)
    rho_ext[0] = row[0]
    rho_ext[1:] = row[:j_up + 1]
    if probs is None:
        rho_d_ext = rho_ext
    else:
        rho_d_ext = _rho_d_extended(values, r, nt_s, probs, j_up)
        np.clip(rho_d_ext, 0.0, 1.0, out=rho_d_ext)
    F_ext = rho_ext * fdm.velocity(fd, rho_d_ext)
    new = (0.5 * (rho_ext[2:] + rho_ext[:-2])
           - 0.5 * lam * (F_ext[2:] - F_ext[:-2]))
    clamped = _clip_counted(new)
    return new, clamped


def lf_step_nonlocal(field: DensityField, step: int, dk: kn.DiscreteKernel,
                     delay: DelaySpec, fd: fdm.FundamentalDiagram,
                     grid: Grid, j_up: int | None = None) -> np.ndarray:
    """One nonlocal LF step; returns clamped updates for columns
    0..j_up-1 (default j_up = n - 1, everything the boundary does not
    prescribe)."""
    if j_up is None:
        j_up = grid.n - 1
    r = grid.collar_time + step
    new, _ = _advance_fixed(field.values, r, fd, grid.dt / grid.dx,
                            j_up, dk.probs, delay.nt_s)
    return new


def _variable_rho_d(values: np.ndarray, r: int, scen: Scenario,
                    delay: DelaySpec, step: int) -> np.ndarray:
    """Per-cell variable-length nonlocal density at columns -1..n-1."""
    g = scen.grid
    n, dx = g.n, g.dx
    kernel = scen.kernel
    out = np.empty(n + 1)
    d_t = step * g.dt
    for jj in range(-1, n):
        d_x = (n - jj) * dx
        d_eff = bd.effective_length(kernel.d, d_x, d_t, scen.gamma, dx)
        n_eff = max(int(round(d_eff / dx)), 1)
        n_eff = min(n_eff, n - jj)
        if delay.nt_s > 0:
            n_eff = min(n_eff, r // delay.nt_s + 1)
        dk = bd.variable_kernel_at(kernel.family, n_eff * dx, dx,
                                   base_d=kernel.d, mode=scen.variable_mode)
        acc = 0.0
        for i, p in enumerate(dk.probs):
            col = jj + i if jj + i >= 0 else 0  # ghost column
            acc += values[r - i * delay.nt_s, col] * p
        out[jj + 1] = acc
    return out


def _advance_variable(values: np.ndarray, r: int, scen: Scenario,
                      delay: DelaySpec, lam: float,
                      step: int) -> tuple[np.ndarray, int]:
    n = scen.grid.n
    row = values[r]
    rho_ext = np.empty(n + 1)
    rho_ext[0] = row[0]
    rho_ext[1:] = row[:n]
    rho_d_ext = _variable_rho_d(values, r, scen, delay, step)
    np.clip(rho_d_ext, 0.0, 1.0, out=rho_d_ext)
    F_ext = rho_ext * fdm.velocity(scen.fd, rho_d_ext)
    new = (0.5 * (rho_ext[2:] + rho_ext[:-2])
           - 0.5 * lam * (F_ext[2:] - F_ext[:-2]))
    clamped = _clip_counted(new)
    return new, clamped


def _gamma_advisory(scen: Scenario) -> float | None:
    if scen.kernel is None or scen.gamma <= 0:
        return None
    if scen.kernel.beta is None:
        warnings.warn(
            "constant kernel with gamma > 0 violates the decay "
            "assumption; no admissible gamma_max exists", stacklevel=3)
        return None
    gm = kn.gamma_max(scen.fd.v_f, fdm.vprime_sup(scen.fd),
                      scen.kernel.beta, kn.evaluate(scen.kernel, 0.0))
    if scen.gamma > gm:
        warnings.warn(
            f"gamma={scen.gamma} exceeds the advisory bound "
            f"gamma_max={gm:.6g}", stacklevel=3)
    return gm


def run(scen: Scenario) -> RunResult:
    """March the scenario n_t steps and return the full field."""
    lam = cfl_check(scen.fd, scen.grid)
    gm = _gamma_advisory(scen)
    if scen.periodic:
        return _run_periodic(scen, gm)

    g = scen.grid
    n, n_t = g.n, g.n_t
    initial = np.asarray(scen.initial, dtype=float)
    if initial.shape != (n,):
        raise ShapeError(f"initial row has {initial.shape}, expected ({n},)")
    if scen.boundary is None:
        raise CoverageError("right-boundary series required")
    boundary_col = np.asarray(scen.boundary, dtype=float)
    if boundary_col.shape != (n_t + 1,):
        raise ShapeError(
            f"boundary column has {boundary_col.shape}, "
            f"expected ({n_t + 1},)")

    dk = kn.sample(scen.kernel, g.dx) if scen.kernel is not None else None
    delay = (make_delay(scen.gamma, g.dx, g.dt)
             if scen.model == SPACETIME else NO_DELAY)

    if scen.model == CLASSICAL or scen.strategy == bd.VARIABLE:
        collar_space, collar_time = 0, 0
    elif scen.strategy == bd.CONTINUOUS:
        collar_space = dk.n_d
        collar_time = dk.n_d * delay.nt_s
    else:  # known thick: prescribed data live inside the interior array
        collar_space, collar_time = 0, 0

    run_grid = make_grid(g.a, g.b, g.T, g.n, g.dt, collar_space, collar_time)
    field = DensityField.allocate(run_grid)
    ct = run_grid.collar_time
    field.values[ct, :n] = initial

    interior_mask = None
    step_start = 0
    j_up = n - 1

    if scen.model != CLASSICAL and scen.strategy == bd.CONTINUOUS:
        bd.extend_continuous(field, initial, boundary_col)
    elif scen.model != CLASSICAL and scen.strategy == bd.KNOWN_THICK:
        if scen.truth is None:
            raise CoverageError("known-thick strategy requires truth data")
        interior_mask = bd.install_known_thick(field, scen.truth,
                                               scen.kernel.d, scen.gamma)
        n_band, nt_band = bd.band_counts(run_grid, scen.kernel.d, scen.gamma)
        step_start = max(nt_band - 1, 0)
        j_up = n - n_band

    clamp_count = 0
    dtdx = run_grid.dt / run_grid.dx
    truth = (np.asarray(scen.truth, dtype=float)
             if scen.truth is not None else None)

    for step in range(step_start, n_t):
        r = ct + step
        if scen.model == CLASSICAL:
            new, c = _advance_fixed(field.values, r, scen.fd, dtdx,
                                    j_up, None, 0)
        elif scen.strategy == bd.VARIABLE:
            new, c = _advance_variable(field.values, r, scen, delay,
                                       dtdx, step)
        else:
            new, c = _advance_fixed(field.values, r, scen.fd, dtdx,
                                    j_up, dk.probs, delay.nt_s)
        clamp_count += c
        field.values[r + 1, :j_up] = new
        # strong imposition of the prescribed data
        if scen.model != CLASSICAL and scen.strategy == bd.KNOWN_THICK:
            field.values[r + 1, j_up:n] = truth[step + 1, j_up:]
        else:
            field.values[r + 1, n - 1] = boundary_col[step + 1]
        if scen.left_boundary is not None:
            field.values[r + 1, 0] = scen.left_boundary[step + 1]

    return RunResult(field=field, clamp_count=clamp_count, cfl=lam,
                     gamma_max=gm, interior_mask=interior_mask)


def _run_periodic(scen: Scenario, gm: float | None) -> RunResult:
    """Periodic test mode: LF stencil and convolution both wrap."""
    g = scen.grid
    lam = cfl_check(scen.fd, g)
    dtdx = g.dt / g.dx
    n, n_t = g.n, g.n_t
    initial = np.asarray(scen.initial, dtype=float)
    if initial.shape != (n,):
        raise ShapeError(f"initial row has {initial.shape}, expected ({n},)")
    dk = kn.sample(scen.kernel, g.dx) if scen.kernel is not None else None
    field = DensityField.allocate(g if g.collar_space == 0 and
                                  g.collar_time == 0 else
                                  make_grid(g.a, g.b, g.T, g.n, g.dt))
    field.values[0] = initial
    clamp_count = 0
    for step in range(n_t):
        row = field.values[step]
        if dk is None:
            rho_d = row
        else:
            ext = np.concatenate([row, row[:dk.n_d]])
            rho_d = np.zeros(n)
            for i, p in enumerate(dk.probs):
                rho_d += ext[i:i + n] * p
            np.clip(rho_d, 0.0, 1.0, out=rho_d)
        F = row * fdm.velocity(scen.fd, rho_d)
        new = (0.5 * (np.roll(row, -1) + np.roll(row, 1))
               - 0.5 * dtdx * (np.roll(F, -1) - np.roll(F, 1)))
        clamp_count += _clip_counted(new)
        field.values[step + 1] = new
    return RunResult(field=field, clamp_count=clamp_count, cfl=lam,
                     gamma_max=gm)


def total_mass(row: np.ndarray, dx: float) -> float:
    """Discrete total mass sum(rho) * dx of one time row."""
    return float(np.sum(row) * dx)
