"""Parameter sweep command for the edd CLI."""

from typing import Any

import click

from ..runner import build_spec, execute
from ..utils import (
    config_option,
    iteration_options,
    jobs_option,
    method_option,
    output_option,
    problem_options,
    swap_option,
)


@click.command("sweep")
@config_option
@method_option
@problem_options
@iteration_options
@swap_option
@jobs_option
@output_option
@click.pass_context
def sweep(ctx: click.Context, **params: Any) -> Any:
    """Run the cross product of methods, nu, N, m and theta values.

    Writes one summary row per cell with the measured and the predicted
    convergence rate. Rows come out in a fixed order whatever --jobs is.
    List options take comma lists or inclusive start:stop:step ranges.

    Examples:
      # Symmetric interface, several relaxation parameters and weights
      edd sweep --method dn,nn --nu 1e-4,1,1e4 --N 100 --m 50 --theta 0.1:0.9:0.1

      # Unrelaxed DN over interface positions
      edd sweep --method dn --N 100 --m 20:80:10 --theta 1 --iters 200 --jobs 4
    """
    return execute(ctx, build_spec(ctx, "sweep", params))
