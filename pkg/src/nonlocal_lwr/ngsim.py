"""Vehicle-trajectory ingestion and gridded density reconstruction.

Converts character-separated trajectory records (public US-101 schema by
default: Vehicle_ID, Frame_ID, Local_Y, Lane_ID) into normalized density
fields by per-frame vehicle counts over fixed grid cells, and slices the
resulting ground truth into exactly the data each boundary strategy
consumes.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np
import pandas as pd

from . import boundary as bd
from .errors import (
    CoverageError,
    DomainError,
    EmptyWindowError,
    FormatError,
)
from .grid import DensityField, Grid

DEFAULT_COLUMNS = {
    "vehicle_id": "Vehicle_ID",
    "frame": "Frame_ID",
    "position": "Local_Y",
    "lane": "Lane_ID",
}

NGSIM_FRAME_PERIOD = 0.1  # s, 10 Hz camera frames


@dataclass(frozen=True)
class TrajectoryRecord:
    vehicle_id: int
    time: float
    position: float
    lane: int


@dataclass
class RasterConfig:
    """Aggregation parameters for trajectory rasterization.

    ``rho_m_physical`` is the jam density in veh/ft used to normalize
    counts; it is a required input since NGSIM has no universal value.
    ``method`` is "count" (instantaneous per-frame counts at the nearest
    frame) or "edie" (time spent in the cell over the step interval).
    ``smoothing_cells`` applies an optional spatial box filter.
    """

    grid: Grid
    lanes: frozenset = dc_field(default_factory=frozenset)
    rho_m_physical: float = 0.2
    frame_period: float = NGSIM_FRAME_PERIOD
    method: str = "count"
    smoothing_cells: int = 0

    def __post_init__(self):
        if self.rho_m_physical <= 0:
            raise DomainError("rho_m_physical must be > 0")
        if self.method not in ("count", "edie"):
            raise DomainError(f"unknown aggregation method {self.method!r}")


def load_trajectories(path: str, columns: dict | None = None,
                      frame_period: float = NGSIM_FRAME_PERIOD,
                      delimiter: str = ",") -> list[TrajectoryRecord]:
    """Parse a trajectory file into time-sorted records.

    Malformed rows (non-numeric fields) are counted, skipped, and
    reported with a warning. Raises FormatError if a mapped column is
    missing.
    """
    if not os.path.exists(path):
        raise FormatError(f"no such file: {path}")
    cols = dict(DEFAULT_COLUMNS)
    if columns:
        cols.update(columns)
    df = pd.read_csv(path, delimiter=delimiter)
    missing = [c for c in cols.values() if c not in df.columns]
    if missing:
        raise FormatError(f"{path}: missing columns {missing}")
    sub = df[[cols["vehicle_id"], cols["frame"], cols["position"],
              cols["lane"]]].apply(pd.to_numeric, errors="coerce")
    bad = int(sub.isna().any(axis=1).sum())
    if bad:
        warnings.warn(f"{path}: skipped {bad} malformed rows")
        sub = sub.dropna()
    if len(sub) == 0:
        warnings.warn(f"{path}: no records")
        return []
    sub = sub.sort_values([cols["vehicle_id"], cols["frame"]])
    return [
        TrajectoryRecord(vehicle_id=int(v), time=float(f) * frame_period,
                         position=float(y), lane=int(l))
        for v, f, y, l in sub.itertuples(index=False)
    ]


def _record_arrays(records) -> tuple[np.ndarray, ...]:
    vid = np.array([r.vehicle_id for r in records], dtype=np.int64)
    t = np.array([r.time for r in records])
    y = np.array([r.position for r in records])
    lane = np.array([r.lane for r in records], dtype=np.int64)
    return vid, t, y, lane


def rasterize(records, cfg: RasterConfig) -> DensityField:
    """Aggregate records into a normalized density field on cfg.grid.

    Count method: for each time step, count distinct in-lane vehicles
    whose position falls in the cell at the nearest frame, divide by
    (cell length * lane count * rho_m_physical) and clamp to [0, 1].
    Edie method: accumulate per-frame presence over the step interval
    and divide by the step duration as well.
    """
    g = cfg.grid
    if not records:
        raise EmptyWindowError("no trajectory records supplied")
    vid, t, y, lane = _record_arrays(records)
    if cfg.lanes:
        keep = np.isin(lane, list(cfg.lanes))
        vid, t, y, lane = vid[keep], t[keep], y[keep], lane[keep]
    n_lanes = len(cfg.lanes) if cfg.lanes else max(len(np.unique(lane)), 1)
    in_window = (y >= g.a) & (y < g.b) & (t >= -0.5 * cfg.frame_period) \
        & (t <= g.n_t * g.dt + 0.5 * cfg.frame_period)
    if not np.any(in_window):
        raise EmptyWindowError("no records fall inside the grid window")
    vid, t, y = vid[in_window], t[in_window], y[in_window]

    frame = np.rint(t / cfg.frame_period).astype(np.int64)
    cell = np.floor((y - g.a) / g.dx).astype(np.int64)
    cell = np.clip(cell, 0, g.n - 1)

    field = DensityField.allocate(g)
    counts = np.zeros((g.n_t + 1, g.n))
    if cfg.method == "count":
        # nearest frame to each step time
        step_frame = np.rint(np.arange(g.n_t + 1) * g.dt
                             / cfg.frame_period).astype(np.int64)
        frame_to_steps: dict[int, list[int]] = {}
        for s, f in enumerate(step_frame):
            frame_to_steps.setdefault(int(f), []).append(s)
        for f, steps in frame_to_steps.items():
            sel = frame == f
            if not np.any(sel):
                continue
            c = np.bincount(cell[sel], minlength=g.n).astype(float)
            for s in steps:
                counts[s] = c
        denom = g.dx * n_lanes * cfg.rho_m_physical
    else:
        # Edie-style: time spent in cell during [t_s, t_s + dt)
        step = np.floor(t / g.dt).astype(np.int64)
        ok = (step >= 0) & (step <= g.n_t)
        np.add.at(counts, (step[ok], cell[ok]), cfg.frame_period)
        denom = g.dx * n_lanes * cfg.rho_m_physical * g.dt
    values = counts / denom
    if cfg.smoothing_cells > 0:
        w = 2 * cfg.smoothing_cells + 1
        kernel = np.ones(w) / w
        values = np.apply_along_axis(
            lambda r: np.convolve(np.pad(r, cfg.smoothing_cells,
                                         mode="edge"), kernel,
                                  mode="valid"), 1, values)
    field.interior[:, :] = np.clip(values, 0.0, 1.0)
    return field


def count_at_frame(field: DensityField, cfg: RasterConfig,
                   step: int) -> float:
    """Invert the count normalization at one time step (vehicle count)."""
    g = cfg.grid
    n_lanes = len(cfg.lanes) if cfg.lanes else 1
    return float(np.sum(field.interior[step]) * g.dx * n_lanes
                 * cfg.rho_m_physical)


def extract_scenario_data(field: DensityField, strategy: bd.BoundaryStrategy):
    """Slice a ground-truth field into the data one strategy consumes.

    Returns (initial row, right-boundary column, thick L-region or
    None). Nothing else from the truth leaks into a run.
    """
    g = field.grid
    interior = field.interior
    initial = interior[0].copy()
    boundary_col = interior[:, g.n - 1].copy()
    if strategy.tag != bd.KNOWN_THICK:
        return initial, boundary_col, None
    region = bd.known_thick_region_mask(g, strategy.d, strategy.gamma)
    thick = np.full(interior.shape, np.nan)
    thick[region] = interior[region]
    return initial, boundary_col, thick
