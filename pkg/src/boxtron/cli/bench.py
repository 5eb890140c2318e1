"""The bench command: batch solves of the hs45 family."""
from __future__ import annotations

import logging
from pathlib import Path

import click
import numpy as np
import pandas as pd

import boxtron.config
from boxtron.batch import BACKENDS, imbalance, make_hs45, solve_batch
from boxtron.cli.console import print_summary, setup_logging
from boxtron.cli.run_config import RunConfig
from boxtron.errors import ContractViolationError
from boxtron.tron import TronConfig
from boxtron.utils.misc import write_json

LOGGER = logging.getLogger(__name__)

BENCH_COLUMNS = ["problem", "status", "iterations", "cg_iterations", "f_star", "x_error", "time"]
#: columns that differ between otherwise identical runs
TIMING_COLUMNS = ["time"]


def run_bench(cfg: RunConfig) -> int:
    """Solves ``batch_size`` copies of hs45(n) and writes ``bench.csv`` and ``bench_summary.json``.

    Args:
        cfg (RunConfig): run settings with ``mode="bench"``

    Returns:
        int: 0 if every problem converged, 1 if some did not, 2 for invalid settings
    """
    try:
        cfg.validate()
        problem = make_hs45(cfg.n)
        tron_config = TronConfig.from_config(tol_pg=cfg.tol_pg)
    except ContractViolationError as e:
        LOGGER.error("%s", e)
        return 2

    x0 = problem.default_start()
    LOGGER.info("Solving %d copies of hs45(n=%d) on %d worker(s)", cfg.batch_size, cfg.n, cfg.workers)
    result = solve_batch(
        [problem] * cfg.batch_size,
        [x0] * cfg.batch_size,
        tron_config,
        workers=cfg.workers,
        backend=cfg.backend,
    )

    expected = problem.upper
    rows = [
        (
            i,
            report.status.value,
            report.iterations,
            report.cg_iterations,
            report.f_star,
            float(np.max(np.abs(report.x_star - expected))),
            elapsed,
        )
        for i, (report, elapsed) in enumerate(zip(result.reports, result.per_problem_time))
    ]
    output_dir = Path(cfg.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=BENCH_COLUMNS).to_csv(output_dir / "bench.csv", index=False)

    summary = {
        "mode": "bench",
        "n": cfg.n,
        "batch_size": cfg.batch_size,
        "workers": cfg.workers,
        "backend": cfg.backend,
        "seed": cfg.seed,
        "tol_pg": cfg.tol_pg,
        "failures": result.failures,
        "total_time": result.batch_wall_time,
        "throughput": len(result) / result.batch_wall_time if result.batch_wall_time > 0 else 0.0,
        "imbalance": imbalance(result.partition_times).to_dict() if len(result.partition_times) >= 2 else None,
    }
    write_json(output_dir / "bench_summary.json", summary)
    print_summary(
        f"hs45(n={cfg.n}) batch",
        [
            ("problems", len(result)),
            ("failures", result.failures),
            ("total time [s]", result.batch_wall_time),
            ("throughput [1/s]", summary["throughput"]),
            ("output", str(output_dir)),
        ],
    )
    return 0 if result.failures == 0 else 1


@click.command("bench")
@click.option("--n", "n", type=int, default=8, show_default=True, help="Dimension of the hs45 problems.")
@click.option("--batch", "batch_size", type=int, default=100, show_default=True, help="Number of problems.")
@click.option(
    "--workers",
    type=int,
    default=lambda: boxtron.config.Configuration["workers"],
    help="Number of parallel partitions.",
)
@click.option(
    "--backend",
    type=click.Choice(BACKENDS),
    default=lambda: boxtron.config.Configuration["backend"],
    help="Worker pool type.",
)
@click.option(
    "--tol-pg",
    type=float,
    default=lambda: boxtron.config.Configuration["tol_pg"],
    help="Tolerance on the infinity norm of the projected gradient.",
)
@click.option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=lambda: boxtron.config.Configuration["output_dir"],
    help="Directory for bench.csv and bench_summary.json.",
)
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the summary.")
@click.option("--log-level", default=lambda: boxtron.config.Configuration["log_level"], help="Log level.")
def bench_cli(n, batch_size, workers, backend, tol_pg, output_dir, seed, log_level):
    """Batch-solve copies of the hs45 problem ``f(x) = 120 - prod(x)``, ``0 <= x_i <= i``.

    Exits with 0 if all problems converged, 1 otherwise and 2 for invalid options.
    The time column of bench.csv and the timings of the summary vary between runs.
    """
    setup_logging(log_level)
    cfg = RunConfig(
        mode="bench",
        n=n,
        batch_size=batch_size,
        workers=workers,
        backend=backend,
        tol_pg=tol_pg,
        output_dir=Path(output_dir),
        seed=seed,
    )
    raise SystemExit(run_bench(cfg))
