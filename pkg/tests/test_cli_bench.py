import json

import pandas as pd
import pytest
from click.testing import CliRunner

from boxtron.cli.bench import TIMING_COLUMNS, bench_cli, run_bench
from boxtron.cli.main import cli
from boxtron.cli.run_config import RunConfig
from tests.conftest import PatchConfig


def test_bench_cli(tmp_path):
    runner = CliRunner()
    result = runner.invoke(cli, ["bench", "--n", "8", "--batch", "100", "--out", str(tmp_path)], catch_exceptions=False)
    assert result.exit_code == 0
    frame = pd.read_csv(tmp_path / "bench.csv")
    assert len(frame) == 100
    assert list(frame["problem"]) == list(range(100))
    assert set(frame["status"]) == {"converged"}
    assert frame["x_error"].max() <= 1e-6
    summary = json.loads((tmp_path / "bench_summary.json").read_text())
    assert summary["failures"] == 0
    assert summary["n"] == 8
    assert summary["imbalance"] is None


def test_bench_empty_batch(tmp_path):
    assert run_bench(RunConfig(mode="bench", batch_size=0, output_dir=tmp_path)) == 0
    frame = pd.read_csv(tmp_path / "bench.csv")
    assert frame.empty
    assert json.loads((tmp_path / "bench_summary.json").read_text())["throughput"] == 0.0


def test_bench_over_capacity(tmp_path):
    runner = CliRunner()
    result = runner.invoke(bench_cli, ["--n", "65", "--out", str(tmp_path)])
    assert result.exit_code == 2
    assert not (tmp_path / "bench.csv").exists()


def test_bench_iteration_limit_exit_code(tmp_path):
    with PatchConfig(config_overwrite={"max_iter": 0}):
        assert run_bench(RunConfig(mode="bench", n=4, batch_size=3, output_dir=tmp_path)) == 1
    frame = pd.read_csv(tmp_path / "bench.csv")
    assert set(frame["status"]) == {"iter_limit"}


@pytest.mark.parametrize("backend", ["process", "thread"])
def test_bench_outputs_are_reproducible(tmp_path, backend):
    first, second = tmp_path / "first", tmp_path / "second"
    run_bench(RunConfig(mode="bench", n=5, batch_size=10, output_dir=first))
    run_bench(RunConfig(mode="bench", n=5, batch_size=10, workers=2, backend=backend, output_dir=second))
    frames = [pd.read_csv(path / "bench.csv").drop(columns=TIMING_COLUMNS) for path in (first, second)]
    pd.testing.assert_frame_equal(*frames)
    assert json.loads((second / "bench_summary.json").read_text())["imbalance"] is not None
