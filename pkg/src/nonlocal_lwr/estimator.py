"""Scikit-learn style wrapper around the reconstruction pipeline.

``NonlocalLWRReconstructor.fit`` takes a ground-truth density field,
extracts exactly the data its boundary strategy is allowed to see
(initial row, right-boundary column, and the thick L-region for the
known-thick strategy), runs the solver, and stores the reconstruction.
``score`` returns the negative relative L2 error, so that larger is
better as estimators expect.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from . import boundary as bd
from . import diagrams as fdm
from . import kernels as kn
from . import ngsim
from .errors import DomainError, ShapeError
from .grid import DensityField, Grid
from .metrics import relative_l2
from .solver import CLASSICAL, Scenario, run


def check_density_field(X, grid: Grid | None = None) -> DensityField:
    """Validate input as a DensityField (or interior array on `grid`)."""
    if isinstance(X, DensityField):
        field = X
    else:
        arr = np.asarray(X, dtype=float)
        if grid is None:
            raise DomainError(
                "array input requires a grid; pass a DensityField or "
                "set the estimator's grid parameter")
        if arr.shape != (grid.n_t + 1, grid.n):
            raise ShapeError(
                f"array shape {arr.shape} != interior "
                f"({grid.n_t + 1}, {grid.n})")
        field = DensityField.allocate(grid)
        field.interior[:, :] = arr
    if not np.all(np.isfinite(field.values)):
        raise DomainError("density field contains non-finite values")
    if field.values.min() < 0 or field.values.max() > 1:
        raise DomainError("density field outside the normalized range [0, 1]")
    return field


class NonlocalLWRReconstructor(BaseEstimator):
    """Traffic-state reconstructor for local and nonlocal LWR models.

    Parameters
    ----------
    model : {"classical", "spatial", "spacetime"}
    fd_family : {"greenshields", "underwood"}
    v_f : float
        Free-flow speed (ft/s).
    rho_c : float
        Underwood critical density (normalized).
    kernel_family : str
        One of the five kernel families (ignored for classical).
    d : float
        Kernel support length (ft).
    gamma : float
        Propagation delay (s/ft); must be 0 for the spatial model.
    strategy : {"continuous", "known_thick", "variable"}
    grid : Grid or None
        Required when fit receives a bare interior array.
    """

    def __init__(self, model="spacetime", fd_family="greenshields",
                 v_f=60.0, rho_c=0.5, kernel_family="shifted_exponential",
                 d=40.0, gamma=0.01, strategy="continuous", grid=None,
                 variable_mode="rescale"):
        self.model = model
        self.fd_family = fd_family
        self.v_f = v_f
        self.rho_c = rho_c
        self.kernel_family = kernel_family
        self.d = d
        self.gamma = gamma
        self.strategy = strategy
        self.grid = grid
        self.variable_mode = variable_mode

    def _scenario(self, truth_field: DensityField) -> Scenario:
        fd = fdm.FundamentalDiagram(self.fd_family, self.v_f, self.rho_c)
        kernel = (None if self.model == CLASSICAL
                  else kn.make_kernel(self.kernel_family, self.d))
        strat = bd.BoundaryStrategy(self.strategy, self.d, self.gamma)
        initial, boundary_col, thick = ngsim.extract_scenario_data(
            truth_field, strat)
        return Scenario(
            grid=truth_field.grid, fd=fd, model=self.model,
            initial=initial, boundary=boundary_col, kernel=kernel,
            gamma=0.0 if self.model != "spacetime" else self.gamma,
            strategy=self.strategy, truth=thick,
            variable_mode=self.variable_mode)

    def fit(self, X, y=None):
        """Reconstruct the density field from the boundary data of X."""
        truth = check_density_field(X, self.grid)
        result = run(self._scenario(truth))
        self.result_ = result
        self.field_ = result.field
        self.interior_mask_ = result.interior_mask
        self.n_features_in_ = truth.grid.n
        return self

    def predict(self, X=None) -> np.ndarray:
        """Reconstructed interior density values (n_t+1, n)."""
        if not hasattr(self, "field_"):
            raise DomainError("estimator is not fitted")
        return self.field_.interior.copy()

    def score(self, X, y=None) -> float:
        """Negative relative L2 error against the truth X."""
        truth = check_density_field(X, self.grid)
        if not hasattr(self, "field_"):
            self.fit(truth)
        report = relative_l2(self.field_, truth, mask=self.interior_mask_,
                             clamp_count=self.result_.clamp_count)
        return -report.er
