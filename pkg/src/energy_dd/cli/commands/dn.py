"""Dirichlet-Neumann iteration command for the edd CLI."""

from typing import Any

import click

from ..runner import build_spec, execute
from ..utils import config_option, iteration_options, output_option, problem_options, swap_option


@click.command("dn")
@config_option
@problem_options
@iteration_options
@swap_option
@output_option
@click.pass_context
def dn(ctx: click.Context, **params: Any) -> Any:
    """Run the relaxed Dirichlet-Neumann iteration and write the trace error decay.

    Without a target the error equation is iterated, so the trace is the
    error itself. Several values of --theta give one decay column each.
    Exits with status 2 when a run diverges.

    Examples:
      # Optimal relaxation at m/N = 1/3
      edd dn --nu 1 --N 99 --m 33 --theta optimal

      # Decay for several relaxation parameters
      edd dn --N 99 --m 33 --theta 0.3,0.5,0.7,optimal --iters 15

      # Dirichlet solve on the right subdomain
      edd dn --N 99 --m 66 --swap
    """
    return execute(ctx, build_spec(ctx, "dn", params))
