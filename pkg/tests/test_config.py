import os
import pathlib
import random
import tempfile
from unittest import mock

import pytest

import boxtron.config
from boxtron.config import Config
from boxtron.tron import TronConfig
from tests.conftest import PatchConfig

# fake home for full control over all config files and variables
# without modifying or deleting the users config files
FAKE_HOME = pathlib.Path(tempfile.mkdtemp())
RANDOM_NUMBER1 = random.randint(1, 12345)
RANDOM_NUMBER2 = random.randint(1, 12345)
RANDOM_NUMBER3 = random.randint(1, 12345)


@mock.patch("pathlib.Path.home", return_value=FAKE_HOME)
def test_config_precedence(tmp):
    with PatchConfig(initial_config_overwrite={"tol_pg": "1e-3", "backend": "thread"}):
        # test initial config overwrite and type conversion
        assert boxtron.config.INITIAL_CONFIG["tol_pg"] == boxtron.config.Configuration["tol_pg"] == 1e-3
        assert boxtron.config.INITIAL_CONFIG["backend"] == "thread"

        # test dynamic overwrite config, not overwriting static configs
        config_overwrite = Config({"tol_pg": "1e-9"})
        assert config_overwrite["tol_pg"] == 1e-9
        assert boxtron.config.Configuration["tol_pg"] == 1e-3

        # change static config directly
        boxtron.config.Configuration["tol_pg"] = "1e-5"
        assert boxtron.config.Configuration["tol_pg"] == 1e-5
        # initial config stays untouched
        assert boxtron.config.INITIAL_CONFIG["tol_pg"] == 1e-3

        # the dynamic config overwrites with its own supplied value
        assert config_overwrite["tol_pg"] == 1e-9


def test_none_hides_keys():
    config = Config({"backend": None})
    assert "backend" not in config
    assert "tol_pg" in config
    with pytest.raises(KeyError):
        config["backend"]


@mock.patch("pathlib.Path.home", return_value=FAKE_HOME)
@mock.patch.dict(os.environ, {"BOXTRON_MAX_ITER": f"{RANDOM_NUMBER1}"})
def test_env_variable_takes_precedence(tmp):
    with PatchConfig(config_overwrite={"admm_max_iter": RANDOM_NUMBER2}, read_initial=True):
        assert boxtron.config.INITIAL_CONFIG["max_iter"] == RANDOM_NUMBER1
        assert boxtron.config.Configuration["admm_max_iter"] == RANDOM_NUMBER2

        # overwrite config supplied takes precedence over env variable
        assert Config({"max_iter": RANDOM_NUMBER3})["max_iter"] == RANDOM_NUMBER3
        assert TronConfig.from_config().max_iter == RANDOM_NUMBER1


@mock.patch("pathlib.Path.home", return_value=FAKE_HOME)
@mock.patch.dict(os.environ, {"BOXTRON_WORKERS": "3"})
def test_env_variable_takes_precedence_over_config_files(tmp):
    boxtron_dir = pathlib.Path.home().joinpath(".boxtron")
    boxtron_dir.mkdir(parents=True, exist_ok=True)
    with boxtron_dir.joinpath("config").open(mode="w+") as config_file:
        config_file.write("[default]\nworkers=2\nrho0=25\n")
    with PatchConfig(read_initial=True):
        assert boxtron.config.Configuration["workers"] == 3
        assert boxtron.config.INITIAL_CONFIG["rho0"] == 25.0
        assert boxtron.config.BOXTRON_DIRECTORY == boxtron_dir
    boxtron_dir.joinpath("config").unlink()


@mock.patch("pathlib.Path.home", return_value=FAKE_HOME)
def test_project_config_file(tmp, tmp_path):
    project = tmp_path.resolve() / "project"
    nested = project / "src" / "deep"
    nested.mkdir(parents=True)
    project.joinpath(".boxtron").write_text("[default]\ntol_dual=0.5\n")
    config, _, project_file = boxtron.config.initial_config(nested)
    assert project_file == project / ".boxtron"
    assert config["tol_dual"] == 0.5
    assert config["tol_primal"] == 1e-4


def test_invalid_value_raises():
    with pytest.raises(ValueError):
        Config({"workers": "many"})


def test_choices_are_normalized():
    config = Config({"backend": " Thread", "log_level": "debug"})
    assert config["backend"] == "thread"
    assert config["log_level"] == "DEBUG"
    with pytest.raises(ValueError, match="not one of"):
        config["backend"] = "gpu"


def test_get_config_overwrite_is_local():
    config = Config({"workers": 4})
    merged = config.get_config({"workers": "2", "rho0": "50"})
    assert merged["workers"] == 2
    assert merged["rho0"] == 50.0
    assert config["workers"] == 4
    assert config["rho0"] == boxtron.config.INITIAL_CONFIG["rho0"]


def test_delete_hides_initial_value():
    config = Config()
    del config["obj_scale"]
    assert "obj_scale" not in config
    assert "obj_scale" in boxtron.config.INITIAL_CONFIG
    with pytest.raises(KeyError):
        del config["obj_scale"]
