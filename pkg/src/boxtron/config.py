"""Layered run configuration of boxtron.

Values are looked up, from lowest to highest priority, in the built-in
:py:data:`DEFAULTS`, the ``[default]`` section of ``~/.boxtron/config``, the
``[default]`` section of a ``.boxtron`` project file and ``BOXTRON_<KEY>``
environment variables. :py:data:`Configuration` sits on top of that and takes
runtime overrides.

Usage:
    from boxtron import Configuration
    Configuration['tol_pg'] = 1e-8
    Configuration['tol_pg']

"""
from __future__ import annotations

import logging
import os
from collections import UserDict
from configparser import ConfigParser
from pathlib import Path
from typing import Any, Callable, Iterable

from boxtron.utils.repo import find_project_config_file

LOGGER = logging.getLogger(__name__)

ENV_PREFIX = "BOXTRON_"


def _one_of(allowed: Iterable[str], normalize: Callable[[str], str] = str.lower) -> Callable[[Any], str]:
    allowed = tuple(allowed)

    def convert(value: Any) -> str:
        value = normalize(str(value).strip())
        if value not in allowed:
            raise ValueError(f"{value!r} is not one of {allowed}")
        return value

    return convert


TYPES: dict[str, Callable[[Any], Any]] = {
    "tol_pg": float,
    "max_iter": int,
    "cg_tol": float,
    "max_dimension": int,
    "workers": int,
    "backend": _one_of(("process", "thread")),
    "rho0": float,
    "admm_max_iter": int,
    "tol_primal": float,
    "tol_dual": float,
    "obj_scale": float,
    "output_dir": os.path.expanduser,
    "log_level": _one_of(("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"), str.upper),
}

DEFAULTS: dict[str, Any] = {
    "tol_pg": 1e-6,
    "max_iter": 200,
    "cg_tol": 0.1,
    "max_dimension": 64,
    "workers": 1,
    "backend": "process",
    "rho0": 10.0,
    "admm_max_iter": 5000,
    "tol_primal": 1e-4,
    "tol_dual": 1e-3,
    "obj_scale": 1e-2,
    "output_dir": ".",
    "log_level": "INFO",
}


def type_convert(config: dict) -> dict:
    """Converts every known key with its converter from :py:data:`TYPES`.

    ``None`` values and unknown keys are passed through unchanged.

    Args:
        config (dict): raw config entries, e.g. strings from a config file

    Returns:
        dict: a new dict with converted values

    Raises:
        ValueError: if a value can not be converted
    """
    return {
        key: TYPES[key](value) if value is not None and key in TYPES else value for key, value in config.items()
    }


def _read_default_section(path: Path) -> dict[str, str]:
    parser = ConfigParser()
    with path.open(encoding="UTF-8") as file:
        parser.read_file(file)
    if not parser.has_section("default"):
        LOGGER.debug("%s has no [default] section, ignoring it", path)
        return {}
    return dict(parser.items("default"))


def _environment_overrides(keys: Iterable[str]) -> dict[str, str]:
    return {key: os.environ[f"{ENV_PREFIX}{key.upper()}"] for key in keys if f"{ENV_PREFIX}{key.upper()}" in os.environ}


def initial_config(
    project_dir: Path | None = None,
) -> tuple[dict, Path, Path | None]:
    """Reads the config files and environment on top of the defaults.

    Args:
        project_dir (Path | None): directory to start the search for a ``.boxtron``
            project file, the current working directory if None

    Returns:
        a tuple (dict, pathlib.Path, pathlib.Path|None):
            the converted config,
            the ``~/.boxtron`` directory
            and the project config file if one was found
    """
    boxtron_directory = Path.home() / ".boxtron"
    layers: list[dict[str, Any]] = [dict(DEFAULTS)]

    global_config_file = boxtron_directory / "config"
    if global_config_file.exists():
        layers.append(_read_default_section(global_config_file))

    project_config_file = find_project_config_file(project_dir)
    if project_config_file:
        LOGGER.debug("Using project configuration file %s on top of the global one.", project_config_file)
        layers.append(_read_default_section(project_config_file))

    layers.append(_environment_overrides(DEFAULTS))

    merged: dict[str, Any] = {}
    for layer in layers:
        merged.update(layer)
    return type_convert(merged), boxtron_directory, project_config_file


class Config(UserDict):
    """Runtime overrides on top of :py:data:`INITIAL_CONFIG`.

    Behaves like a dict whose missing keys are read from the initial config,
    which itself is never modified. Values are converted on assignment.
    Assigning ``None`` hides a key, also one that the initial config defines.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.data = type_convert(self.data)

    def _combined(self) -> dict:
        merged = {**INITIAL_CONFIG, **self.data}
        return {key: value for key, value in merged.items() if value is not None}

    def __setitem__(self, key, value):
        if key in TYPES and value is not None:
            value = TYPES[key](value)
        self.data[key] = value

    def __getitem__(self, key):
        value = self.data.get(key)
        if value is not None:
            return value
        if key in self.data:
            raise KeyError(key)
        return self._combined()[key]

    def __delitem__(self, key):
        if key not in self:
            raise KeyError(key)
        self.data[key] = None

    def __contains__(self, item):
        return item in self._combined()

    def __iter__(self):
        return iter(self._combined())

    def __len__(self):
        return len(self._combined())

    def __repr__(self):
        return repr(self._combined())

    def items(self):
        """ItemsView of the merged config."""
        return self._combined().items()

    def values(self):
        """ValuesView of the merged config."""
        return self._combined().values()

    def get_config(self, overwrite_config: dict | None = None) -> dict:
        """The merged config as a plain dict.

        Args:
            overwrite_config (dict | None): applied on top, only for the returned dict

        Returns:
            dict:
        """
        return {**self._combined(), **type_convert(overwrite_config or {})}


(
    INITIAL_CONFIG,
    BOXTRON_DIRECTORY,
    BOXTRON_PROJECT_CONFIG_FILE,
) = initial_config()
Configuration = Config()
__all__ = ["INITIAL_CONFIG", "BOXTRON_DIRECTORY", "Configuration", "Config"]
