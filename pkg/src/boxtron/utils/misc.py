"""These are miscellaneous utility functions."""
from __future__ import annotations

import json
import math
import shutil
from pathlib import Path
from typing import Any, Callable


def print_horizontal_line(c: str = "-", print_handler: Callable[[str], Any] = print):
    """Print a horizontal line with `:py:attr:c`.

    It uses the amount of terminal columns to print a line of good length,
    80 columns when there is no terminal.

    Args:
        c (str): the char to print
        print_handler (Callable[[str],Any]): the function to use for printing
    """
    print_handler(c * shutil.get_terminal_size((80, 24)).columns)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(path: Path, payload: dict) -> Path:
    """Writes ``payload`` as indented JSON with sorted keys.

    numpy scalars are converted to python numbers and non-finite floats to ``null``.

    Args:
        path (Path): output file, parent directories are created
        payload (dict): the data

    Returns:
        Path: the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="UTF-8") as file:
        json.dump(_jsonable(payload), file, indent=2, sort_keys=True)
        file.write("\n")
    return path
