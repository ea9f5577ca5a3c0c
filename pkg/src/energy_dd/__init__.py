"""Domain decomposition for energy-norm regularized elliptic optimal control.

With an energy-norm (H^-1) control cost, the optimality system of a
tracking-type elliptic control problem reduces to a single singularly
perturbed Poisson equation for the state. This package discretizes that
equation on uniform 1D and 2D meshes, solves it monolithically or with
relaxed Dirichlet-Neumann and Neumann-Neumann interface iterations, and
evaluates the closed-form convergence factors and optimal relaxation
parameters the iterations are measured against.
"""

# Version of the package
try:
    from importlib.metadata import version as _version

    __version__ = _version("energy-dd")
except ImportError:
    raise ImportError(
        "Failed to determine package version. This package requires Python 3.10+ "
        "where importlib.metadata is available, or must be installed as a package."
    )

# Import main components for easier access
from .constraints import EnumConstraint, NumericConstraint
from .dn import DNStep, dn_step, dn_step_2d, run_dn, run_dn_2d
from .errors import (
    ConfigFileNotFoundError,
    ConfigurationError,
    ConstraintViolation,
    DecompositionError,
    EnergyDDError,
    GridDataError,
    InvalidConfigFormatError,
    MeshError,
    MeshMismatchError,
    ParameterValidationError,
    ProblemDefinitionError,
    SolverError,
    UnknownParameterError,
)
from .gridio import read_grid_csv, write_grid_csv
from .iteration import DNConfig, IterationConfig, IterationRecord, IterationReport, NNConfig, Verdict
from .logging import LogEvent, get_logger
from .mesh import Decomposition, GridFunction, Mesh1D, Mesh2D, Side, make_mesh
from .model import (
    KKTSolution,
    Regularization,
    cost,
    h_minus1_norm_squared,
    recover_control_h1,
    regularization_contrast,
    solve_monolithic_h1,
    solve_monolithic_l2_kkt,
)
from .nn import NNStep, nn_step, nn_step_2d, run_nn, run_nn_2d
from .problem import Problem, make_problem, sample_target
from .settings import Settings, get_settings, read_run_config
from .subdomain import InterfaceBC, SubdomainSolution, solve_subdomain, variational_flux
from .theory import (
    Method,
    SymbolMode,
    optimal_theta,
    rho_1d,
    rho_2d,
    rho_dn_1d,
    rho_nn_1d,
    sup_rho_2d,
    theta_star_1d,
    theta_star_2d,
    theta_star_dn_1d,
    theta_star_nn_1d,
)

# Define public API
__all__ = [
    # Mesh and problem
    "Side",
    "Mesh1D",
    "Mesh2D",
    "make_mesh",
    "Decomposition",
    "GridFunction",
    "Problem",
    "make_problem",
    "sample_target",
    "read_grid_csv",
    "write_grid_csv",
    # Monolithic model
    "Regularization",
    "KKTSolution",
    "solve_monolithic_h1",
    "solve_monolithic_l2_kkt",
    "recover_control_h1",
    "h_minus1_norm_squared",
    "cost",
    "regularization_contrast",
    # Subdomains and iterations
    "InterfaceBC",
    "SubdomainSolution",
    "solve_subdomain",
    "variational_flux",
    "IterationConfig",
    "DNConfig",
    "NNConfig",
    "IterationRecord",
    "IterationReport",
    "Verdict",
    "DNStep",
    "dn_step",
    "dn_step_2d",
    "run_dn",
    "run_dn_2d",
    "NNStep",
    "nn_step",
    "nn_step_2d",
    "run_nn",
    "run_nn_2d",
    # Theory
    "Method",
    "SymbolMode",
    "rho_dn_1d",
    "rho_nn_1d",
    "rho_1d",
    "theta_star_dn_1d",
    "theta_star_nn_1d",
    "theta_star_1d",
    "rho_2d",
    "sup_rho_2d",
    "theta_star_2d",
    "optimal_theta",
    # Configuration
    "Settings",
    "get_settings",
    "read_run_config",
    "NumericConstraint",
    "EnumConstraint",
    # Errors
    "EnergyDDError",
    "ConfigurationError",
    "ConfigFileNotFoundError",
    "InvalidConfigFormatError",
    "ParameterValidationError",
    "ConstraintViolation",
    "UnknownParameterError",
    "MeshError",
    "DecompositionError",
    "ProblemDefinitionError",
    "MeshMismatchError",
    "GridDataError",
    "SolverError",
    # Logging
    "LogEvent",
    "get_logger",
]
