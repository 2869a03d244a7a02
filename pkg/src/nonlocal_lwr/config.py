"""Scenario configuration files (INI: key/value with sections).

Sections and keys:

    [grid]     a, b, T, n, dt
    [fd]       family = greenshields|underwood, v_f, rho_c
    [model]    model = classical|spatial|spacetime
    [kernel]   family, d_ft
    [delay]    gamma
    [boundary] strategy = continuous|known_thick|variable, variable_mode
    [io]       initial_csv, boundary_csv, truth_csv, out_csv
    [trajectories] path, lanes, rho_m_physical, frame_period, method
    [sweep]    families, lengths, strategies, models (comma-separated)

``truth_csv`` points at a field CSV written by this toolkit (with its
`.meta.json` sidecar). When initial/boundary CSVs are absent they are
sliced from the truth field.
"""

from __future__ import annotations

import configparser
import os

import numpy as np

from . import boundary as bd
from . import diagrams as fdm
from . import kernels as kn
from . import ngsim
from .errors import ConfigError, FormatError
from .grid import Grid, import_field, make_grid
from .solver import CLASSICAL, SPACETIME, Scenario


def load_config(path: str) -> configparser.ConfigParser:
    if not os.path.exists(path):
        raise ConfigError(f"no such config file: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return cp


def _get(cp, section, key, cast=str, default=None, required=False):
    if not cp.has_option(section, key):
        if required:
            raise ConfigError(f"missing [{section}] {key}")
        return default
    try:
        return cast(cp.get(section, key))
    except ValueError as exc:
        raise ConfigError(f"bad value for [{section}] {key}: {exc}") from exc


def build_grid(cp) -> Grid:
    return make_grid(
        a=_get(cp, "grid", "a", float, required=True),
        b=_get(cp, "grid", "b", float, required=True),
        T=_get(cp, "grid", "T", float, required=True),
        n=_get(cp, "grid", "n", int, required=True),
        dt=_get(cp, "grid", "dt", float, required=True),
    )


def build_fd(cp) -> fdm.FundamentalDiagram:
    family = _get(cp, "fd", "family", str, default=fdm.GREENSHIELDS)
    v_f = _get(cp, "fd", "v_f", float, default=60.0)
    rho_c = _get(cp, "fd", "rho_c", float, default=0.5)
    return fdm.FundamentalDiagram(family, v_f, rho_c)


def _load_series(path: str, expected_len: int, what: str) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[0] != expected_len:
        raise FormatError(
            f"{path}: expected {expected_len} {what} records, "
            f"got {data.shape[0]}")
    return data[:, -1]


def build_scenario(cp, base_dir: str = ".") -> tuple[Scenario, dict]:
    """Build the scenario plus an io dict with resolved paths and the
    truth field (if configured)."""
    grid = build_grid(cp)
    fd = build_fd(cp)
    model = _get(cp, "model", "model", str, default=CLASSICAL)
    strategy = _get(cp, "boundary", "strategy", str, default=bd.CONTINUOUS)
    variable_mode = _get(cp, "boundary", "variable_mode", str,
                         default="rescale")
    gamma = _get(cp, "delay", "gamma", float, default=0.0)
    kernel = None
    if model != CLASSICAL:
        family = _get(cp, "kernel", "family", str, required=True)
        d = _get(cp, "kernel", "d_ft", float, required=True)
        kernel = kn.make_kernel(family, d)

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base_dir, p)

    io = {
        "truth_csv": _get(cp, "io", "truth_csv"),
        "initial_csv": _get(cp, "io", "initial_csv"),
        "boundary_csv": _get(cp, "io", "boundary_csv"),
        "out_csv": _get(cp, "io", "out_csv", default="reconstruction.csv"),
    }
    truth_field = None
    if io["truth_csv"]:
        truth_field, _ = import_field(resolve(io["truth_csv"]))
        tg = truth_field.grid
        if (tg.a, tg.b, tg.n, tg.dt, tg.n_t) != \
                (grid.a, grid.b, grid.n, grid.dt, grid.n_t):
            raise ConfigError("truth field grid differs from [grid]")

    strat = bd.BoundaryStrategy(strategy, kernel.d if kernel else 0.0, gamma)
    if truth_field is not None:
        initial, boundary_col, thick = ngsim.extract_scenario_data(
            truth_field, strat)
    else:
        initial = boundary_col = thick = None
    if io["initial_csv"]:
        initial = _load_series(resolve(io["initial_csv"]), grid.n, "initial")
    if io["boundary_csv"]:
        boundary_col = _load_series(resolve(io["boundary_csv"]),
                                    grid.n_t + 1, "boundary")
    if initial is None or boundary_col is None:
        raise ConfigError(
            "initial and boundary data required (via io CSVs or truth_csv)")

    scen = Scenario(
        grid=grid, fd=fd, model=model, initial=initial,
        boundary=boundary_col, kernel=kernel,
        gamma=gamma if model == SPACETIME else 0.0,
        strategy=strategy, truth=thick, variable_mode=variable_mode)
    io["truth_field"] = truth_field
    return scen, io


def build_raster_config(cp, grid: Grid) -> ngsim.RasterConfig:
    lanes_raw = _get(cp, "trajectories", "lanes", str, default="")
    lanes = frozenset(int(x) for x in lanes_raw.split(",") if x.strip())
    return ngsim.RasterConfig(
        grid=grid,
        lanes=lanes,
        rho_m_physical=_get(cp, "trajectories", "rho_m_physical", float,
                            default=0.2),
        frame_period=_get(cp, "trajectories", "frame_period", float,
                          default=ngsim.NGSIM_FRAME_PERIOD),
        method=_get(cp, "trajectories", "method", str, default="count"),
        smoothing_cells=_get(cp, "trajectories", "smoothing_cells", int,
                             default=0),
    )


def sweep_lists(cp) -> dict:
    if not cp.has_section("sweep"):
        raise ConfigError("sweep requires a [sweep] section")

    def split(key, default=""):
        raw = _get(cp, "sweep", key, str, default=default)
        return [x.strip() for x in raw.split(",") if x.strip()]

    out = {
        "families": split("families"),
        "lengths": [float(x) for x in split("lengths")],
        "strategies": split("strategies", bd.CONTINUOUS),
        "models": split("models", SPACETIME),
    }
    if not out["families"] or not out["lengths"]:
        raise ConfigError("sweep needs non-empty families and lengths")
    return out
