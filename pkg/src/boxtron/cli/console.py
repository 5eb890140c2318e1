"""Logging and terminal output shared by the sub-commands."""
from __future__ import annotations

import logging
from typing import Iterable

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from boxtron.utils.misc import print_horizontal_line

console = Console()
err_console = Console(stderr=True)


def setup_logging(level: str = "INFO") -> logging.Logger:
    """Routes the ``boxtron`` loggers to a RichHandler on stderr.

    Calling it again replaces the handler, so repeated invocations in one
    process do not duplicate output.
    """
    log = logging.getLogger("boxtron")
    for handler in [h for h in log.handlers if isinstance(h, RichHandler)]:
        log.removeHandler(handler)
    rh = RichHandler(getattr(logging, level.upper(), logging.INFO), console=err_console, markup=True)
    rh.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    log.addHandler(rh)
    log.setLevel(rh.level)
    return log


def print_summary(title: str, rows: Iterable[tuple[str, object]]):
    """Prints a two column key/value table to stdout."""
    table = Table(title=title, show_header=False)
    table.add_column("key", style="bold")
    table.add_column("value")
    for key, value in rows:
        table.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))
    print_horizontal_line(print_handler=console.print)
    console.print(table)
