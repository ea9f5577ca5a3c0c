"""Rich table formatter for run summaries.

Summaries go to stderr; stdout carries only CSV.
"""

import math
from typing import Optional, Sequence, TextIO

from rich.console import Console
from rich.table import Table

from ...iteration import IterationReport, Verdict


def create_console(output: Optional[TextIO] = None, no_color: bool = False) -> Console:
    """Create a Rich console instance.

    Args:
        output: Output stream (defaults to stderr)
        no_color: Disable color output

    Returns:
        Console instance
    """
    if output is None:
        return Console(stderr=True, no_color=no_color)
    return Console(file=output, no_color=no_color)


_VERDICT_STYLE = {Verdict.CONVERGED: "green", Verdict.MAX_ITER: "yellow", Verdict.DIVERGED: "red"}


def _format_number(value: float) -> str:
    if math.isnan(value):
        return "N/A"
    if math.isinf(value):
        return "inf"
    return f"{value:.4g}"


def format_reports_table(reports: Sequence[IterationReport], console: Console) -> None:
    """Format iteration reports as a table.

    Args:
        reports: Reports of one ``dn``/``nn`` invocation
        console: Rich console
    """
    table = Table(title="Interface iteration")
    table.add_column("Method", style="cyan")
    table.add_column("Theta", justify="right")
    table.add_column("Iterations", justify="right")
    table.add_column("Final error", justify="right")
    table.add_column("Rate", justify="right")
    table.add_column("Verdict")

    for report in reports:
        style = _VERDICT_STYLE[report.verdict]
        table.add_row(
            report.method.upper(),
            _format_number(report.theta),
            str(report.iterations),
            _format_number(report.final_error),
            _format_number(report.measured_rate),
            f"[{style}]{report.verdict.value}[/{style}]",
        )

    console.print(table)
