"""Helpers for locating project specific files."""
from __future__ import annotations

import logging
from pathlib import Path

LOGGER = logging.getLogger(__name__)

PROJECT_CONFIG_NAME = ".boxtron"


def find_project_config_file(project_directory: Path | None = None) -> Path | None:
    """Get the project config file by walking up from a directory.

    The first ``.boxtron`` file found in ``project_directory`` or any of its
    parents wins.

    Args:
        project_directory (Path | None): start directory, current working directory if None

    Returns:
        Path | None: path to the project config file or None if there is none
    """
    start = Path(project_directory or Path.cwd()).resolve()
    for directory in (start, *start.parents):
        candidate = directory / PROJECT_CONFIG_NAME
        if candidate.is_file():
            LOGGER.debug("Found project config file %s", candidate)
            return candidate
    return None
