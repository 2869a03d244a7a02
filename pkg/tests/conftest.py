import numpy as np
import pytest

from nonlocal_lwr import (
    DensityField,
    greenshields,
    make_grid,
)


@pytest.fixture
def fd60():
    return greenshields(60.0)


@pytest.fixture
def grid_small():
    """5 cells, dt/dx = 0.5 (dx=1, dt=0.5), two time rows."""
    return make_grid(a=0.0, b=5.0, T=0.5, n=5, dt=0.5)


@pytest.fixture
def grid_road():
    """Highway-like grid: 2000 ft, 60 s, dx=10, dt=0.1."""
    return make_grid(a=0.0, b=2000.0, T=60.0, n=200, dt=0.1)


def field_from_rows(grid, rows):
    field = DensityField.allocate(grid)
    rows = np.asarray(rows, dtype=float)
    field.values[grid.collar_time:grid.collar_time + rows.shape[0],
                 :rows.shape[1]] = rows
    return field


def smooth_profile(x, lo=0.2, hi=0.6, period=400.0):
    x = np.asarray(x, dtype=float)
    mid, amp = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return mid + amp * np.sin(2.0 * np.pi * x / period)
