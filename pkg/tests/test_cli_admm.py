import json
import logging

import pandas as pd
import pytest
from click.testing import CliRunner

from boxtron.cli.admm import TIMING_PREFIXES, admm_cli, run_admm
from boxtron.cli.main import cli
from boxtron.cli.run_config import RunConfig
from boxtron.errors import EvaluationError
from tests.utils import two_bus_case_text


def deterministic_columns(frame: pd.DataFrame) -> pd.DataFrame:
    return frame[[c for c in frame.columns if not c.startswith(TIMING_PREFIXES)]]


def test_admm_forced_iteration_limit(tmp_path):
    runner = CliRunner()
    result = runner.invoke(
        cli, ["admm", "--case", "case2", "--max-iter", "1", "--out", str(tmp_path)], catch_exceptions=False
    )
    assert result.exit_code == 1
    frame = pd.read_csv(tmp_path / "admm_history.csv")
    assert len(frame) == 1
    assert list(frame.columns[:4]) == ["iter", "primal", "dual", "objective"]
    summary = json.loads((tmp_path / "admm_summary.json").read_text())
    assert summary["status"] == "iter_limit"
    assert summary["case"] == "case2"
    assert summary["iterations"] == 1


def test_admm_missing_case(tmp_path):
    runner = CliRunner()
    result = runner.invoke(admm_cli, ["--case", str(tmp_path / "missing.m"), "--out", str(tmp_path)])
    assert result.exit_code == 2
    assert not (tmp_path / "admm_summary.json").exists()


def test_admm_parse_error(tmp_path):
    path = tmp_path / "broken.m"
    path.write_text(two_bus_case_text().replace("mpc.gen = [", "mpc.generators = ["))
    assert run_admm(RunConfig(mode="admm", case_path=str(path), output_dir=tmp_path)) == 2


def test_admm_invalid_options(tmp_path):
    assert run_admm(RunConfig(mode="admm", case_path="case2", rho0=-1.0, output_dir=tmp_path)) == 2
    assert run_admm(RunConfig(mode="admm", case_path=None, output_dir=tmp_path)) == 2


def test_admm_solver_failure_is_reported(tmp_path, monkeypatch, caplog):
    def failing_solve(case, opts):
        raise EvaluationError("objective is not finite")

    monkeypatch.setattr("boxtron.cli.admm.admm_solve", failing_solve)
    with caplog.at_level(logging.ERROR, logger="boxtron.cli.admm"):
        assert run_admm(RunConfig(mode="admm", case_path="case2", output_dir=tmp_path)) == 1
    assert "ADMM on case2 failed: objective is not finite" in caplog.text
    assert "Can not run case" not in caplog.text
    assert not (tmp_path / "admm_summary.json").exists()


def test_admm_zero_demand_converges(tmp_path):
    path = tmp_path / "idle.m"
    path.write_text(two_bus_case_text(pd=0.0, qd=0.0, pmin=-100.0, pmax=100.0, c2=0.0, c1=0.0))
    assert run_admm(RunConfig(mode="admm", case_path=str(path), output_dir=tmp_path / "out")) == 0
    summary = json.loads((tmp_path / "out" / "admm_summary.json").read_text())
    assert summary["status"] == "converged"
    assert summary["objective"] == pytest.approx(0.0, abs=1e-8)
    assert summary["primal_residual"] == 0.0


def test_admm_outputs_are_reproducible(tmp_path):
    outputs = []
    for name, workers in (("serial", 1), ("threads", 2)):
        cfg = RunConfig(
            mode="admm", case_path="case9", max_iter=3, workers=workers, backend="thread", output_dir=tmp_path / name
        )
        assert run_admm(cfg) == 1
        outputs.append(deterministic_columns(pd.read_csv(tmp_path / name / "admm_history.csv")))
    pd.testing.assert_frame_equal(*outputs)


@pytest.mark.performance
def test_admm_case9_defaults(tmp_path):
    runner = CliRunner()
    result = runner.invoke(cli, ["admm", "--case", "case9", "--out", str(tmp_path)], catch_exceptions=False)
    assert result.exit_code == 0
    summary = json.loads((tmp_path / "admm_summary.json").read_text())
    assert {"objective", "primal_residual", "dual_residual"} <= set(summary)
