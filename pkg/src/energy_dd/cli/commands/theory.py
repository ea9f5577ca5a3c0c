"""Convergence-factor scan command for the edd CLI."""

from typing import Any

import click

from ..runner import build_spec, execute
from ..utils import (
    FLOAT_LIST,
    INT_LIST,
    NU_LIST,
    THETA_LIST,
    config_option,
    method_option,
    output_option,
    scan_k_option,
    swap_option,
    symbol_option,
)


@click.command("theory")
@config_option
@method_option
@click.option("--nu", type=NU_LIST, help="Regularization weight; 'h2' couples it to the mesh as h^2.")
@click.option("--N", "--n-cells", "n_cells", type=INT_LIST, help="Cells per direction; fixes the admissible alphas.")
@click.option("--m", type=INT_LIST, help="Interface node index; the interface sits at x = m/N.")
@click.option("--alpha", type=FLOAT_LIST, help="Interface position; must equal m/N for an integer m.")
@click.option("--theta", type=THETA_LIST, help="Relaxation parameter(s); one rho column per value.")
@scan_k_option
@symbol_option
@swap_option
@output_option
@click.pass_context
def theory(ctx: click.Context, **params: Any) -> Any:
    """Scan the 2D convergence factor over the frequencies 0..scan-k.

    Writes one ``k,rho`` row per frequency, the k -> infinity limit and a
    summary row with the equioscillating relaxation parameter.

    Examples:
      # NN factor at m/N = 1/3 for k in [0, 40]
      edd theory --method nn --nu 1 --N 99 --m 33 --scan-k 40

      # DN factors for several relaxation parameters
      edd theory --method dn --N 99 --m 33 --theta 0.3,0.5,0.7,optimal --scan-k 40
    """
    return execute(ctx, build_spec(ctx, "theory", params))
