"""Fire-front temperature evolution on rectangles.

Heat flow with a nonlocal ignition source and a gradient-direction convection
sink, discretized with second-order differences in space and backward Euler
steps in time, solved by fixed-point iteration per time window and glued
across windows. See the README for the model and the CLI entry points.
"""

from ._backend import BACKEND
from .config import RunConfig, parse_config, read_field_csv, serialize_config
from .errors import (
    ConfigError,
    FirefrontError,
    JunctionMismatchError,
    LinearSolverError,
    NonconvergenceError,
)
from .front import FrontContour, extract_front
from .global_solve import (
    CAUCHY_TOL,
    EPSILON_0,
    JUNCTION_TOL,
    ChunkPlan,
    ContinuationReport,
    default_chunk_length,
    gamma_continuation,
    glue,
    junction_jump,
    solve_global,
)
from .grid import (
    GridSpec,
    ScalarField,
    VectorField,
    boundary_max_abs,
    eigenmode,
    gradient,
    h1_norm,
    h1_seminorm,
    integrate,
    l2_norm,
    laplacian,
    negative_part,
    positive_part,
    quadrature_weights,
    zero_boundary_ring,
)
from .model import (
    BetaFunction,
    Kernel,
    Scenario,
    TimeSamples,
    convection_forcing,
    ignition_forcing,
    total_forcing,
)
from .solver import (
    LINEAR_TOL,
    PicardReport,
    Trajectory,
    apply_solution_operator,
    constant_trajectory,
    equation_residual,
    heat_step,
    regularity_check,
    solve_short_time,
    spacetime_h1_distance,
    spacetime_l2_distance,
)
from .verify import (
    CheckResult,
    check_convection_bound,
    check_convection_lipschitz,
    check_ignition_bound,
    check_ignition_lipschitz,
    check_modulation_holder,
    check_power_difference,
    check_sublinear_growth,
    power_difference_margins,
    run_suite,
    write_suite_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BetaFunction",
    "CAUCHY_TOL",
    "CheckResult",
    "ChunkPlan",
    "ConfigError",
    "ContinuationReport",
    "EPSILON_0",
    "FirefrontError",
    "FrontContour",
    "GridSpec",
    "JUNCTION_TOL",
    "JunctionMismatchError",
    "Kernel",
    "LINEAR_TOL",
    "LinearSolverError",
    "NonconvergenceError",
    "PicardReport",
    "RunConfig",
    "ScalarField",
    "Scenario",
    "TimeSamples",
    "Trajectory",
    "VectorField",
    "apply_solution_operator",
    "boundary_max_abs",
    "check_convection_bound",
    "check_convection_lipschitz",
    "check_ignition_bound",
    "check_ignition_lipschitz",
    "check_modulation_holder",
    "check_power_difference",
    "check_sublinear_growth",
    "constant_trajectory",
    "convection_forcing",
    "default_chunk_length",
    "eigenmode",
    "equation_residual",
    "extract_front",
    "gamma_continuation",
    "glue",
    "gradient",
    "h1_norm",
    "h1_seminorm",
    "heat_step",
    "ignition_forcing",
    "integrate",
    "junction_jump",
    "l2_norm",
    "laplacian",
    "negative_part",
    "parse_config",
    "positive_part",
    "quadrature_weights",
    "read_field_csv",
    "regularity_check",
    "power_difference_margins",
    "run_suite",
    "serialize_config",
    "solve_global",
    "solve_short_time",
    "spacetime_h1_distance",
    "spacetime_l2_distance",
    "total_forcing",
    "write_suite_csv",
    "zero_boundary_ring",
]
