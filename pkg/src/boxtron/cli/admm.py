"""The admm command: component ADMM on a MATPOWER case."""
from __future__ import annotations

import logging
from pathlib import Path

import click
import pandas as pd

import boxtron.config
from boxtron.acopf.admm import AdmmOptions, AdmmResult, AdmmStatus, admm_solve
from boxtron.acopf.case import load_case
from boxtron.batch import BACKENDS
from boxtron.cli.console import print_summary, setup_logging
from boxtron.cli.run_config import RunConfig
from boxtron.errors import BoxtronError, ContractViolationError
from boxtron.tron import TronConfig
from boxtron.utils.misc import write_json

LOGGER = logging.getLogger(__name__)

#: columns that differ between otherwise identical runs
TIMING_PREFIXES = ("batch_time_", "wall_time")


def history_frame(result: AdmmResult) -> pd.DataFrame:
    """Per-iteration log with one ``batch_time_<k>`` column per partition."""
    partitions = max((len(record.partition_times) for record in result.history), default=0)
    rows = []
    for record in result.history:
        row = {
            "iter": record.iteration,
            "primal": record.primal,
            "dual": record.dual,
            "objective": record.objective,
            "branch_failures": record.branch_failures,
        }
        for k in range(partitions):
            row[f"batch_time_{k}"] = record.partition_times[k] if k < len(record.partition_times) else None
        row["wall_time"] = record.wall_time
        rows.append(row)
    columns = ["iter", "primal", "dual", "objective", "branch_failures"]
    columns += [f"batch_time_{k}" for k in range(partitions)] + ["wall_time"]
    return pd.DataFrame(rows, columns=columns)


def run_admm(cfg: RunConfig) -> int:
    """Runs the ADMM and writes ``admm_history.csv`` and ``admm_summary.json``.

    Args:
        cfg (RunConfig): run settings with ``mode="admm"``

    Returns:
        int: 0 if both residual tolerances were met, 1 if not or if the solver failed,
            2 for invalid settings or an unreadable case
    """
    try:
        cfg.validate()
        case = load_case(cfg.case_path)
        opts = AdmmOptions.from_config(
            rho0=cfg.rho0,
            max_iter=cfg.max_iter,
            tol_primal=cfg.tol_primal,
            tol_dual=cfg.tol_dual,
            workers=cfg.workers,
            backend=cfg.backend,
            tron=TronConfig.from_config(tol_pg=cfg.tol_pg),
        )
    except (OSError, ContractViolationError) as e:
        LOGGER.error("%s", e)
        return 2
    except BoxtronError as e:
        LOGGER.error("Can not run case %s: %s", cfg.case_path, e)
        return 2

    try:
        result = admm_solve(case, opts)
    except BoxtronError as e:
        # nothing to summarize, the run did not finish
        LOGGER.error("ADMM on %s failed: %s", case.name, e)
        return 1

    output_dir = Path(cfg.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    history_frame(result).to_csv(output_dir / "admm_history.csv", index=False)
    summary = result.summary()
    summary.update(
        {
            "mode": "admm",
            "case": case.name,
            "rho0": opts.rho0,
            "rho_voltage": opts.rho_volt,
            "tol_primal": opts.tol_primal,
            "tol_dual": opts.tol_dual,
            "workers": opts.workers,
            "seed": cfg.seed,
        }
    )
    write_json(output_dir / "admm_summary.json", summary)
    print_summary(
        f"ADMM on {case.name}",
        [
            ("status", result.status.value),
            ("iterations", result.iterations),
            ("objective [$/h]", result.objective),
            ("primal residual", result.primal),
            ("dual residual", result.dual),
            ("line limit violations", len(result.line_violations)),
            ("output", str(output_dir)),
        ],
    )
    return 0 if result.status is AdmmStatus.CONVERGED else 1


@click.command("admm")
@click.option(
    "--case",
    "case_path",
    required=True,
    help="Path to a MATPOWER case file, or the name of a bundled case (case2, case9).",
)
@click.option("--rho0", type=float, default=lambda: boxtron.config.Configuration["rho0"], help="Power penalty.")
@click.option(
    "--max-iter", type=int, default=lambda: boxtron.config.Configuration["admm_max_iter"], help="Iteration limit."
)
@click.option(
    "--tol-primal", type=float, default=lambda: boxtron.config.Configuration["tol_primal"], help="Primal tolerance."
)
@click.option("--tol-dual", type=float, default=lambda: boxtron.config.Configuration["tol_dual"], help="Dual tolerance.")
@click.option(
    "--tol-pg",
    type=float,
    default=lambda: boxtron.config.Configuration["tol_pg"],
    help="Projected gradient tolerance of the branch solves.",
)
@click.option(
    "--workers", type=int, default=lambda: boxtron.config.Configuration["workers"], help="Branch partitions."
)
@click.option(
    "--backend",
    type=click.Choice(BACKENDS),
    default=lambda: boxtron.config.Configuration["backend"],
    help="Worker pool type.",
)
@click.option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=lambda: boxtron.config.Configuration["output_dir"],
    help="Directory for admm_history.csv and admm_summary.json.",
)
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the summary.")
@click.option("--log-level", default=lambda: boxtron.config.Configuration["log_level"], help="Log level.")
def admm_cli(case_path, rho0, max_iter, tol_primal, tol_dual, tol_pg, workers, backend, output_dir, seed, log_level):
    """Run the component ADMM for AC optimal power flow on a case.

    Exits with 0 on convergence, 1 if the iteration limit was hit (the outputs are
    still written) and 2 if the case can not be read. The batch_time and
    wall_time columns of the history vary between runs.
    """
    setup_logging(log_level)
    cfg = RunConfig(
        mode="admm",
        case_path=case_path,
        rho0=rho0,
        max_iter=max_iter,
        tol_primal=tol_primal,
        tol_dual=tol_dual,
        tol_pg=tol_pg,
        workers=workers,
        backend=backend,
        output_dir=Path(output_dir),
        seed=seed,
    )
    raise SystemExit(run_admm(cfg))
