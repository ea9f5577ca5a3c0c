"""Neumann-Neumann iteration command for the edd CLI."""

from typing import Any

import click

from ..runner import build_spec, execute
from ..utils import config_option, iteration_options, output_option, problem_options


@click.command("nn")
@config_option
@problem_options
@iteration_options
@output_option
@click.pass_context
def nn(ctx: click.Context, **params: Any) -> Any:
    """Run the relaxed Neumann-Neumann iteration and write the trace error decay.

    Without a target the error equation is iterated, so the trace is the
    error itself. Several values of --theta give one decay column each.
    Exits with status 2 when a run diverges.

    Examples:
      # Optimal relaxation at m/N = 1/3
      edd nn --nu 1 --N 99 --m 33 --theta optimal

      # Decay for several relaxation parameters
      edd nn --N 99 --m 33 --theta 0.3,0.5,0.7,optimal --iters 15
    """
    return execute(ctx, build_spec(ctx, "nn", params))
