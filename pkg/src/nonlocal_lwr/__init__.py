"""Simulation and traffic-state reconstruction for local and nonlocal
LWR conservation laws: look-ahead convolution kernels with propagation
delay, three boundary-data strategies, an adapted Lax-Friedrichs scheme,
and relative-L2 validation against gridded trajectory data."""

from .boundary import (
    BoundaryStrategy,
    CONTINUOUS,
    KNOWN_THICK,
    VARIABLE,
    effective_length,
    extend_continuous,
    install_known_thick,
    variable_kernel_at,
)
from .diagrams import (
    FundamentalDiagram,
    char_speed,
    flux,
    greenshields,
    underwood,
    velocity,
    vprime_sup,
)
from .estimator import NonlocalLWRReconstructor
from .grid import (
    DensityField,
    Grid,
    clamp_density,
    export_field,
    import_field,
    make_grid,
)
from .kernels import (
    DiscreteKernel,
    Kernel,
    beta_bound,
    evaluate,
    gamma_max,
    make_kernel,
    normalization_constant,
    sample,
)
from .metrics import ErrorReport, relative_l2
from .ngsim import (
    RasterConfig,
    TrajectoryRecord,
    extract_scenario_data,
    load_trajectories,
    rasterize,
)
from .nonlocal_op import (
    DelaySpec,
    make_delay,
    nonlocal_density_row,
    nonlocal_density_spacetime,
    nonlocal_density_spatial,
)
from .solver import (
    CLASSICAL,
    SPACETIME,
    SPATIAL,
    RunResult,
    Scenario,
    cfl_check,
    lf_step_classical,
    lf_step_nonlocal,
    run,
)

__version__ = "0.1.0"
