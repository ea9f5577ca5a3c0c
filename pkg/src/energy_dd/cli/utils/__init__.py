"""CLI utilities package."""

from .helpers import (
    FLOAT_LIST,
    INT_LIST,
    METHOD_LIST,
    NU_LIST,
    THETA_LIST,
    ExitCode,
    configure_logging,
    expand_range,
    handle_error,
    resolve_log_level,
)
from .options import (
    config_option,
    field_option,
    iteration_options,
    jobs_option,
    method_option,
    output_option,
    problem_options,
    reg_option,
    scan_k_option,
    swap_option,
    symbol_option,
)

__all__ = [
    "ExitCode",
    "handle_error",
    "resolve_log_level",
    "configure_logging",
    "expand_range",
    "FLOAT_LIST",
    "INT_LIST",
    "NU_LIST",
    "THETA_LIST",
    "METHOD_LIST",
    "config_option",
    "problem_options",
    "iteration_options",
    "symbol_option",
    "scan_k_option",
    "swap_option",
    "method_option",
    "reg_option",
    "field_option",
    "jobs_option",
    "output_option",
]
