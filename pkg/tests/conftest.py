"""Shared fixtures and options of the boxtron test suite.

Read more about conftest.py under:
https://pytest.org/latest/plugins.html
"""
from __future__ import annotations

import copy
import os

import numpy as np
import pytest

import boxtron.config


def pytest_addoption(parser):
    parser.addoption(
        "--performance",
        action="store_true",
        help="also run the slow tests marked with @pytest.mark.performance",
    )


def pytest_runtest_setup(item):
    if "performance" in item.keywords and not item.config.getoption("--performance"):
        pytest.skip("need --performance option to run this test")


class PatchConfig:
    """Temporarily replaces the module level configuration of :mod:`boxtron.config`.

    Args:
        config_overwrite: runtime overrides, the new ``Configuration``
        initial_config_overwrite: merged into ``INITIAL_CONFIG``
        read_initial: re-read files and environment first, e.g. after patching ``Path.home``
    """

    _GLOBALS = ("INITIAL_CONFIG", "BOXTRON_DIRECTORY", "BOXTRON_PROJECT_CONFIG_FILE", "Configuration")

    def __init__(
        self,
        config_overwrite: dict | None = None,
        initial_config_overwrite: dict | None = None,
        read_initial: bool = False,
    ):
        self.config_overwrite = config_overwrite
        self.initial_config_overwrite = initial_config_overwrite
        self.read_initial = read_initial
        self._saved: dict | None = None

    def __enter__(self) -> PatchConfig:
        self._saved = {name: copy.deepcopy(getattr(boxtron.config, name)) for name in self._GLOBALS}
        if self.read_initial:
            (
                boxtron.config.INITIAL_CONFIG,
                boxtron.config.BOXTRON_DIRECTORY,
                boxtron.config.BOXTRON_PROJECT_CONFIG_FILE,
            ) = boxtron.config.initial_config()
        if self.initial_config_overwrite:
            boxtron.config.INITIAL_CONFIG.update(boxtron.config.type_convert(self.initial_config_overwrite))
        if self.config_overwrite:
            boxtron.config.Configuration = boxtron.config.Config(self.config_overwrite)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        for name, value in (self._saved or {}).items():
            setattr(boxtron.config, name, value)
        self._saved = None


@pytest.fixture(autouse=True)
def _config_for_unit_tests(request, tmp_path_factory):
    if "no_patch_conf" in request.keywords:
        yield
        return
    output_dir = tmp_path_factory.mktemp("boxtron_output")
    with PatchConfig(initial_config_overwrite={"output_dir": os.fspath(output_dir)}):
        yield


@pytest.fixture()
def rng():
    return np.random.default_rng(20231)
