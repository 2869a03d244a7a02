"""Uniform space-time grids and the density-field container.

Densities are stored normalized by the jam density (rho_m = 1 internally);
the physical jam density appears only at ingestion and export. The field
array is row = time, column = space, with column index increasing
downstream. Row 0 sits at physical time -collar_time*dt so that collar
rows (past time) and collar columns (beyond the right boundary) live in
the same array as the interior.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    NonFiniteError,
    ResolutionError,
    ShapeError,
)


@dataclass(frozen=True)
class Grid:
    """Uniform discretization of (0, T) x (a, b) with optional collars.

    Attributes
    ----------
    a, b : float
        Segment endpoints (ft), b > a.
    T : float
        Time horizon (s). The effective horizon is n_t * dt.
    n : int
        Number of uniform cells in (a, b).
    dt : float
        Time step (s).
    collar_space : int
        Downstream collar cell count (columns beyond x = b).
    collar_time : int
        Past-time collar step count (rows before t = 0).
    """

    a: float
    b: float
    T: float
    n: int
    dt: float
    collar_space: int = 0
    collar_time: int = 0

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def n_t(self) -> int:
        return int(round(self.T / self.dt))

    @property
    def shape(self) -> tuple[int, int]:
        """Array shape of a density field on this grid (collars included)."""
        return (self.n_t + 1 + self.collar_time, self.n + self.collar_space)

    # -- index <-> coordinate maps (cell centers, row times) -----------------

    def time_of_row(self, row: int) -> float:
        return (row - self.collar_time) * self.dt

    def x_of_col(self, col: int) -> float:
        return self.a + (col + 0.5) * self.dx

    def row_of_time(self, t: float) -> int:
        return self.collar_time + int(round(t / self.dt))

    def col_of_x(self, x: float) -> int:
        return int(math.floor((x - self.a) / self.dx))


def make_grid(a: float, b: float, T: float, n: int, dt: float,
              collar_space: int = 0, collar_time: int = 0) -> Grid:
    """Validate and build a :class:`Grid`.

    Raises
    ------
    DomainError
        If b <= a, n < 3, dt <= 0, or a collar count is negative.
    ResolutionError
        If round(T / dt) < 1.
    """
    if b <= a:
        raise DomainError(f"require b > a, got a={a}, b={b}")
    if n < 3:
        raise DomainError(f"require n >= 3, got n={n}")
    if dt <= 0:
        raise DomainError(f"require dt > 0, got dt={dt}")
    if collar_space < 0 or collar_time < 0:
        raise DomainError("collar counts must be >= 0")
    if int(round(T / dt)) < 1:
        raise ResolutionError(f"horizon T={T} under-resolved by dt={dt}")
    return Grid(float(a), float(b), float(T), int(n), float(dt),
                int(collar_space), int(collar_time))


def clamp_density(x: float) -> float:
    """Clamp a scalar to the normalized density range [0, 1].

    Raises NonFiniteError on NaN or infinity.
    """
    if not math.isfinite(x):
        raise NonFiniteError(f"non-finite density {x!r}")
    return min(max(x, 0.0), 1.0)


class DensityField:
    """2-D array of normalized densities on a :class:`Grid`.

    Array index (0, 0) maps to the physical point
    (-collar_time * dt, a): collar rows precede t = 0, collar columns
    extend past x = b.
    """

    def __init__(self, grid: Grid, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ShapeError(
                f"values shape {values.shape} != grid shape {grid.shape}")
        self.grid = grid
        self.values = values

    @classmethod
    def allocate(cls, grid: Grid, fill: float = 0.0) -> "DensityField":
        return cls(grid, np.full(grid.shape, float(fill)))

    @property
    def interior(self) -> np.ndarray:
        """View of the (n_t+1) x n interior block (t >= 0, x < b)."""
        g = self.grid
        return self.values[g.collar_time:, :g.n]

    def copy(self) -> "DensityField":
        return DensityField(self.grid, self.values.copy())


# -- CSV import/export --------------------------------------------------------

def export_field(field: DensityField, path: str, rho_m: float = 1.0) -> None:
    """Write a field as `t,x,rho` CSV (time-major) plus a sidecar
    `<path>.meta.json` recording the grid and the physical jam density."""
    g = field.grid
    rows, cols = g.shape
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "rho"])
        for r in range(rows):
            t = g.time_of_row(r)
            for j in range(cols):
                w.writerow([repr(t), repr(g.x_of_col(j)),
                            repr(float(field.values[r, j]))])
    meta = {
        "a": g.a, "b": g.b, "T": g.T, "n": g.n, "dt": g.dt,
        "collar_space": g.collar_space, "collar_time": g.collar_time,
        "rho_m": rho_m,
    }
    with open(path + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)


def import_field(path: str) -> tuple[DensityField, float]:
    """Read a field written by :func:`export_field`.

    Returns the field and the physical jam density from the sidecar.
    """
    meta_path = path + ".meta.json"
    if not os.path.exists(meta_path):
        raise ShapeError(f"missing sidecar metadata {meta_path}")
    with open(meta_path) as fh:
        meta = json.load(fh)
    grid = make_grid(meta["a"], meta["b"], meta["T"], meta["n"], meta["dt"],
                     meta.get("collar_space", 0), meta.get("collar_time", 0))
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    rows, cols = grid.shape
    if data.shape[0] != rows * cols:
        raise ShapeError(
            f"{path}: expected {rows * cols} records, got {data.shape[0]}")
    values = data[:, 2].reshape(rows, cols)
    return DensityField(grid, values), float(meta.get("rho_m", 1.0))
