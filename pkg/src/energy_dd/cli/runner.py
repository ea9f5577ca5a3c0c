"""Turn parsed command options into a :class:`RunSpec` and run it."""

import sys
from typing import Any, Dict, Union

import click

from ..errors import EnergyDDError
from ..experiments import RunSpec, format_value, run
from .formatters import create_console, format_reports_table
from .utils import ExitCode

# Option names that differ from the RunSpec attribute they fill
_RENAMED = {"field": "grid_field"}
_IGNORED = frozenset({"config"})


def build_spec(ctx: click.Context, command: str, params: Dict[str, Any]) -> RunSpec:
    """Build and validate the spec of ``command`` from its option values.

    Options left unset fall back to the :class:`RunSpec` defaults.

    Raises:
        click.UsageError: If the spec violates a parameter constraint
    """
    values = {_RENAMED.get(name, name): value for name, value in params.items() if name not in _IGNORED}
    values = {name: value for name, value in values.items() if value is not None}
    try:
        spec = RunSpec(command=command, **values)
        spec.validate()
    except EnergyDDError as e:
        raise click.UsageError(str(e), ctx=ctx)
    return spec


def execute(ctx: click.Context, spec: RunSpec) -> Union[RunSpec, int]:
    """Run ``spec`` unless the CLI was invoked for parsing only.

    Returns:
        The spec when parsing only, otherwise the exit code
    """
    obj = ctx.ensure_object(dict)
    if obj.get("parse_only"):
        return spec

    if spec.out:
        with open(spec.out, "w", encoding="utf-8", newline="") as f:
            outcome = run(spec, f)
    else:
        outcome = run(spec, sys.stdout)

    for method, theta in outcome.resolved_thetas.items():
        click.echo(f"theta[{method}] = optimal -> {format_value(theta)}", err=True)
    if outcome.reports and obj.get("verbose", 0) > obj.get("quiet", 0):
        format_reports_table(outcome.reports, create_console(no_color=obj.get("no_color", False)))

    return ExitCode.DIVERGED if outcome.diverged else ExitCode.SUCCESS
