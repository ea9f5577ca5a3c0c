"""Helper functions for CLI operations."""

import logging
import sys
from typing import Any, List, NoReturn, Optional, Tuple, Union

import click
import numpy as np
from rich.console import Console
from rich.logging import RichHandler

from ...experiments import NU_H2, OPTIMAL
from ...logging import get_logger


class ExitCode:
    """Standard exit codes for the CLI."""

    SUCCESS = 0
    USAGE_ERROR = 1
    DIVERGED = 2  # a studied outcome, distinct from an error


def handle_error(error: Union[Exception, str], exit_code: int = ExitCode.USAGE_ERROR) -> NoReturn:
    """Handle CLI errors with consistent formatting.

    Args:
        error: Exception or message to report
        exit_code: Exit code to use
    """
    click.echo(f"Error: {str(error)}", err=True)
    sys.exit(exit_code)


def resolve_log_level(verbose: int = 0, quiet: int = 0, debug: bool = False) -> int:
    """Resolve the log level from the verbosity flags.

    ``--debug`` wins; otherwise the larger of ``-v`` and ``-q`` counts decides.
    """
    if debug:
        return logging.DEBUG
    if verbose > quiet:
        return logging.DEBUG if verbose >= 2 else logging.INFO
    if quiet > verbose:
        return logging.ERROR if quiet >= 2 else logging.WARNING
    return logging.WARNING


def configure_logging(level: int, no_color: bool = False) -> None:
    """Attach a stderr ``RichHandler`` to the package logger.

    Handlers from a previous invocation in the same process are replaced.
    """
    logger = get_logger()
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    console = Console(stderr=True, no_color=no_color)
    handler = RichHandler(console=console, show_path=False, show_time=False, rich_tracebacks=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False


def _split(value: str) -> List[str]:
    items = [item.strip() for item in value.split(",")]
    return [item for item in items if item]


def expand_range(text: str, integer: bool = False) -> List[Union[int, float]]:
    """Expand an inclusive ``start:stop:step`` range.

    Args:
        text: Range text
        integer: Produce ints instead of floats

    Returns:
        The range values; floats are rounded to 12 decimals so ``0.1:0.9:0.1``
        yields ``0.3`` rather than ``0.30000000000000004``

    Raises:
        ValueError: If the range is malformed or empty
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range '{text}' must be start:stop:step")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError(f"range '{text}' needs a positive step")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    if count <= 0:
        raise ValueError(f"range '{text}' is empty")
    values = start + step * np.arange(count)
    if integer:
        return [int(round(v)) for v in values]
    return [float(np.round(v, 12)) for v in values]


class ListParamType(click.ParamType):
    """Comma-separated values and inclusive ``start:stop:step`` ranges.

    Args:
        integer: Parse integers instead of floats
        tokens: Literal words accepted alongside numbers (``optimal``, ``h2``)
    """

    def __init__(self, integer: bool = False, tokens: Tuple[str, ...] = ()) -> None:
        self.integer = integer
        self.tokens = tokens
        kind = "INTS" if integer else "FLOATS"
        self.name = f"{kind}|{'|'.join(t.upper() for t in tokens)}" if tokens else kind

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> Tuple[Any, ...]:
        if isinstance(value, tuple):
            return value
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = str(value)
        values: List[Any] = []
        for item in _split(str(value)):
            if item.lower() in self.tokens:
                values.append(item.lower())
                continue
            try:
                if ":" in item:
                    values.extend(expand_range(item, self.integer))
                elif self.integer:
                    values.append(int(item))
                else:
                    values.append(float(item))
            except ValueError as e:
                self.fail(str(e) if ":" in item else f"'{item}' is not a valid {self.name.lower()} entry", param, ctx)
        if not values:
            self.fail("empty list", param, ctx)
        return tuple(values)


class WordListParamType(click.ParamType):
    """Comma-separated choice of words."""

    name = "WORDS"

    def __init__(self, choices: Tuple[str, ...]) -> None:
        self.choices = choices

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> Tuple[str, ...]:
        if isinstance(value, tuple):
            return value
        words = tuple(w.lower() for w in _split(str(value)))
        if not words:
            self.fail("empty list", param, ctx)
        for word in words:
            if word not in self.choices:
                self.fail(f"'{word}' is not one of {', '.join(self.choices)}", param, ctx)
        return words


FLOAT_LIST = ListParamType()
INT_LIST = ListParamType(integer=True)
NU_LIST = ListParamType(tokens=(NU_H2,))
THETA_LIST = ListParamType(tokens=(OPTIMAL,))
METHOD_LIST = WordListParamType(("dn", "nn"))
