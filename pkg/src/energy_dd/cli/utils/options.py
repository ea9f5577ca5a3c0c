"""Common CLI options and decorators.

Option parameter names equal the canonical run configuration keys, so
entries of a ``--config`` file reach the options through the context's
``default_map`` and explicit flags always win.
"""

from typing import Any, Callable, Optional, TypeVar

import click

from ...config_paths import get_run_config_path
from ...errors import EnergyDDError
from ...experiments import FIELDS
from ...logging import LogEvent, log_debug
from ...settings import read_run_config
from .helpers import FLOAT_LIST, INT_LIST, METHOD_LIST, NU_LIST, THETA_LIST

F = TypeVar("F", bound=Callable[..., Any])


def _load_run_config(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[str]:
    path = value or get_run_config_path()
    if path is None:
        return value
    try:
        entries = read_run_config(path)
    except EnergyDDError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)
    log_debug(LogEvent.CONFIG, "Applying run configuration", path=str(path), keys=sorted(entries))
    ctx.default_map = {**(ctx.default_map or {}), **entries}
    return value


def _apply(func: F, *decorators: Callable[[F], F]) -> F:
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def config_option(func: F) -> F:
    """Add --config option to a command."""
    return click.option(
        "--config",
        type=click.Path(dir_okay=False),
        is_eager=True,
        callback=_load_run_config,
        help="Flat 'key = value' run configuration (defaults to $EDD_CONFIG_PATH or the user config file).",
    )(func)


def problem_options(func: F) -> F:
    """Add the mesh, interface and problem data options to a command."""
    return _apply(
        func,
        click.option("--nu", type=NU_LIST, help="Regularization weight; 'h2' couples it to the mesh as h^2."),
        click.option("--N", "--n-cells", "n_cells", type=INT_LIST, help="Cells per direction of the uniform mesh."),
        click.option("--m", type=INT_LIST, help="Interface node index; the interface sits at x = m/N."),
        click.option("--alpha", type=FLOAT_LIST, help="Interface position; must equal m/N for an integer m."),
        click.option("--dim", type=click.IntRange(1, 2), help="Spatial dimension (1 or 2)."),
        click.option("--target", type=str, help="Target name (zero, bump, sine) or a CSV grid file."),
        click.option("--kappa", type=str, help="Diffusion coefficient: a constant or 'step:k1:k2' across the interface."),
    )


def iteration_options(func: F) -> F:
    """Add the interface iteration options to a command."""
    return _apply(
        func,
        click.option("--theta", type=THETA_LIST, help="Relaxation parameter(s), comma list or range; 'optimal' uses theory."),
        click.option("--iters", type=int, help="Maximum number of iterations."),
        click.option("--tol", type=float, help="Stopping tolerance on the interface trace error."),
        click.option("--guard", type=float, help="Trace error above which a run is declared diverged."),
        click.option("--trace0", type=click.Choice(["const", "random"], case_sensitive=False), help="Initial trace."),
        click.option("--seed", type=int, help="Seed of the random initial trace."),
        click.option("--mode-k", "mode_k", type=int, help="2D initial trace sin(k*pi*y); 0 gives the constant trace."),
        symbol_option,
        scan_k_option,
    )


def symbol_option(func: F) -> F:
    """Add --symbol option to a command."""
    return click.option(
        "--symbol",
        type=click.Choice(["continuum", "discrete"], case_sensitive=False),
        help="Symbol used when resolving theta=optimal or scanning frequencies.",
    )(func)


def scan_k_option(func: F) -> F:
    """Add --scan-k option to a command."""
    return click.option("--scan-k", "scan_k", type=int, help="Largest frequency of a convergence-factor scan.")(func)


def swap_option(func: F) -> F:
    """Add --swap option to a command."""
    return click.option("--swap", is_flag=True, default=False, help="DN: Dirichlet solve on the right subdomain.")(func)


def method_option(func: F) -> F:
    """Add --method option to a command."""
    return click.option("--method", type=METHOD_LIST, help="Domain-decomposition method(s): dn, nn.")(func)


def reg_option(func: F) -> F:
    """Add --reg option to a command."""
    return click.option(
        "--reg",
        type=click.Choice(["l2", "h1", "hminus1"], case_sensitive=False),
        help="Control regularization: l2 or the energy norm (h1, hminus1).",
    )(func)


def field_option(func: F) -> F:
    """Add --field option to a command."""
    return click.option("--field", type=click.Choice(FIELDS, case_sensitive=False), help="Grid field to write.")(func)


def jobs_option(func: F) -> F:
    """Add --jobs option to a command."""
    return click.option("--jobs", "-j", type=int, help="Number of sweep cells run concurrently.")(func)


def output_option(func: F) -> F:
    """Add --out option to a command."""
    return click.option("--out", "-o", type=click.Path(dir_okay=False), help="Write CSV to file instead of stdout.")(func)
