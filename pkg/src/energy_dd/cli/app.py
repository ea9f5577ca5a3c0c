"""Main CLI application for energy-dd."""

import sys
from typing import Any, List, Optional, Sequence

# Import guards for optional CLI dependencies
try:
    import click
    import rich_click as rich_click
except ImportError as e:
    raise ImportError("CLI dependencies not available. Install with: pip install energy-dd[cli]") from e

from ..errors import EnergyDDError
from ..experiments import RunSpec
from .utils import ExitCode, configure_logging, handle_error, resolve_log_level

# Configure rich-click
rich_click.rich_click.USE_RICH_MARKUP = True
rich_click.rich_click.USE_MARKDOWN = True
rich_click.rich_click.SHOW_ARGUMENTS = True
rich_click.rich_click.GROUP_ARGUMENTS_OPTIONS = True


class EddGroup(rich_click.RichGroup):
    """Command group with the edd exit code convention.

    Usage errors and library errors print a one-line ``Error: ...`` on
    stderr and exit 1 (click's own usage errors would exit 2, which edd
    reserves for a diverged run). A command's integer return value becomes
    the exit status.
    """

    def main(  # type: ignore[override]
        self,
        args: Optional[Sequence[str]] = None,
        prog_name: Optional[str] = None,
        complete_var: Optional[str] = None,
        standalone_mode: bool = True,
        **extra: Any,
    ) -> Any:
        if not standalone_mode:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(ExitCode.USAGE_ERROR)
        except click.ClickException as e:
            handle_error(e.format_message(), ExitCode.USAGE_ERROR)
        except EnergyDDError as e:
            handle_error(e, ExitCode.USAGE_ERROR)
        sys.exit(rv if isinstance(rv, int) else ExitCode.SUCCESS)


def _show_version(ctx: click.Context, param: click.Parameter, value: bool) -> None:
    if not value or ctx.resilient_parsing:
        return
    try:
        from .. import __version__

        library_version = __version__
    except ImportError:
        library_version = "unknown"
    click.echo(f"edd version: {library_version}")
    ctx.exit()


@click.group(cls=EddGroup)
@click.option("--verbose", "-v", count=True, help="Increase verbosity (can be used multiple times).")
@click.option("--quiet", "-q", count=True, help="Decrease verbosity (can be used multiple times).")
@click.option("--debug", is_flag=True, help="Enable debug-level logging.")
@click.option("--no-color", is_flag=True, help="Disable color output.")
@click.option(
    "--version",
    is_flag=True,
    is_eager=True,
    expose_value=False,
    callback=_show_version,
    help="Print version information.",
)
@click.pass_context
def app(
    ctx: click.Context,
    verbose: int = 0,
    quiet: int = 0,
    debug: bool = False,
    no_color: bool = False,
) -> None:
    """energy-dd - domain decomposition for energy-norm regularized optimal control.

    Solves the control problem on the whole domain, runs the relaxed
    Dirichlet-Neumann and Neumann-Neumann iterations, scans the predicted
    convergence factors and sweeps parameters. Results are written as CSV
    on stdout (or --out); logs and summaries go to stderr.

    Examples:
      # DN iteration at m/N = 1/3 with the optimal relaxation
      edd dn --nu 1 --N 99 --m 33 --theta optimal

      # Convergence factor over frequencies 0..40
      edd theory --method nn --N 99 --m 33 --scan-k 40

      # Sweep relaxation parameters, four cells at a time
      edd sweep --method dn,nn --N 100 --m 50 --theta 0.1:0.9:0.1 --jobs 4
    """
    ctx.ensure_object(dict)
    log_level = resolve_log_level(verbose, quiet, debug)
    if not ctx.obj.get("parse_only"):
        configure_logging(log_level, no_color=no_color)

    ctx.obj.update(
        {
            "verbose": verbose,
            "quiet": quiet,
            "debug": debug,
            "no_color": no_color,
            "log_level": log_level,
        }
    )


# Import and register subcommands after the group is defined
from .commands import dn, nn, solve, sweep, theory  # noqa: E402

app.add_command(solve.solve)
app.add_command(dn.dn)
app.add_command(nn.nn)
app.add_command(theory.theory)
app.add_command(sweep.sweep)


def parse_args(argv: List[str]) -> RunSpec:
    """Parse an ``edd`` command line into a validated :class:`RunSpec` without running it.

    Args:
        argv: Arguments after the program name, e.g. ``["dn", "--N", "99", "--m", "33"]``

    Returns:
        The fully resolved spec; flags override config file entries

    Raises:
        click.ClickException: On an unknown flag, a malformed value or a constraint violation
    """
    spec = app.main(list(argv), prog_name="edd", standalone_mode=False, obj={"parse_only": True})
    if not isinstance(spec, RunSpec):
        raise click.UsageError("no command given")
    return spec


if __name__ == "__main__":
    app()
