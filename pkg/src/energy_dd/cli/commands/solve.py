"""Monolithic solve command for the edd CLI."""

from typing import Any

import click

from ..runner import build_spec, execute
from ..utils import config_option, field_option, output_option, problem_options, reg_option


@click.command("solve")
@config_option
@problem_options
@reg_option
@field_option
@output_option
@click.pass_context
def solve(ctx: click.Context, **params: Any) -> Any:
    """Solve the control problem on the whole domain and write a grid field.

    With the energy-norm regularization the reduced Poisson problem is solved
    and the control recovered from the state; with ``--reg l2`` the full
    optimality system is solved (1D only).

    Examples:
      # Energy-norm control for the target x(1-x)
      edd solve --nu 1e-2 --N 200 --target bump

      # L2-regularized control for comparison
      edd solve --nu 1e-2 --N 200 --target bump --reg l2
    """
    return execute(ctx, build_spec(ctx, "solve", params))
