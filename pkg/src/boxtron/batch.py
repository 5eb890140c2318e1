"""Batch solving of many independent bound-constrained problems.

Problems are dealt out in input order as contiguous, evenly sized partitions,
one per worker. Each worker solves its partition sequentially and times every
solve, so results never depend on the schedule and the partition times feed
the load-imbalance statistics of :func:`imbalance`.
"""
from __future__ import annotations

import dataclasses
import logging
import multiprocessing
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from itertools import repeat
from typing import Sequence

import numpy as np

from boxtron.errors import ContractViolationError
from boxtron.problems import Hs45Problem
from boxtron.tron import BoundedProblem, SolveReport, TronConfig, TronSolver

LOGGER = logging.getLogger(__name__)

BACKENDS = ("process", "thread")


@contextmanager
def _poolcontext(*args, **kwargs):
    pool = multiprocessing.Pool(*args, **kwargs)
    try:
        yield pool
    finally:
        pool.terminate()


def _solve_partition(
    problems: Sequence[BoundedProblem], x0s: Sequence[np.ndarray], cfg: TronConfig
) -> tuple[list[SolveReport], list[float], float]:
    start = time.perf_counter()
    solver = TronSolver(cfg)
    reports, times = [], []
    for problem, x0 in zip(problems, x0s):
        tic = time.perf_counter()
        reports.append(solver.solve(problem, x0))
        times.append(time.perf_counter() - tic)
    return reports, times, time.perf_counter() - start


@dataclasses.dataclass
class BatchResult:
    """Reports of a batch, in input order, with timings in seconds."""

    reports: list[SolveReport]
    per_problem_time: list[float]
    batch_wall_time: float
    partition_times: list[float] = dataclasses.field(default_factory=list)

    def __len__(self):
        return len(self.reports)

    @property
    def failures(self) -> int:
        """Number of problems that did not converge."""
        return sum(not report.converged for report in self.reports)


@dataclasses.dataclass
class ImbalanceStats:
    """Percent load imbalance per iteration and its aggregates."""

    nu_per_iter: list[float]
    nu_max: float
    nu_min: float
    nu_mean: float

    def to_dict(self) -> dict:
        """Plain dict for JSON summaries."""
        return dataclasses.asdict(self)


def imbalance(times_per_partition_per_iter) -> ImbalanceStats:
    """Percent imbalance ``(max / mean - 1) * 100`` of partition times.

    Args:
        times_per_partition_per_iter (array-like): seconds, one row per iteration and
            one column per partition; a flat sequence counts as a single iteration

    Returns:
        ImbalanceStats:

    Raises:
        ContractViolationError: for fewer than 2 partitions, no iterations, or
            nonpositive times
    """
    times = np.asarray(times_per_partition_per_iter, dtype=float)
    if times.ndim == 1:
        times = times[np.newaxis, :]
    if times.ndim != 2 or times.shape[0] < 1:
        raise ContractViolationError(f"imbalance needs at least one iteration, got shape {times.shape}")
    if times.shape[1] < 2:
        raise ContractViolationError(f"imbalance needs at least 2 partitions, got {times.shape[1]}")
    if not np.all(np.isfinite(times)) or np.any(times <= 0):
        raise ContractViolationError("partition times must be finite and positive")

    tmax = times.max(axis=1)
    nu = (tmax / times.mean(axis=1) - 1.0) * 100.0
    nu = np.where(tmax == times.min(axis=1), 0.0, np.maximum(nu, 0.0))
    return ImbalanceStats(
        nu_per_iter=[float(v) for v in nu],
        nu_max=float(nu.max()),
        nu_min=float(nu.min()),
        nu_mean=float(nu.mean()),
    )


class BatchSolver:
    """Solves batches of problems on a pool of workers.

    The pool lives as long as the context, so repeated batches (one per ADMM
    iteration for example) do not pay the start-up cost again. With one
    worker everything runs in the calling process.

    Example:
        >>> with BatchSolver(workers=4) as solver:
        >>>     result = solver.solve(problems, x0s, TronConfig())

    """

    def __init__(self, workers: int = 1, backend: str = "process"):
        if workers < 1:
            raise ContractViolationError(f"workers must be at least 1, got {workers}")
        if backend not in BACKENDS:
            raise ContractViolationError(f"backend must be one of {BACKENDS}, got {backend!r}")
        self.workers = workers
        self.backend = backend
        self._pool = None
        self._context = None

    def __enter__(self) -> BatchSolver:
        if self.workers > 1:
            if self.backend == "process":
                self._context = _poolcontext(processes=self.workers)
                self._pool = self._context.__enter__()
            else:
                self._pool = ThreadPoolExecutor(max_workers=self.workers)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self._context is not None:
            self._context.__exit__(exc_type, exc_val, exc_tb)
        elif self._pool is not None:
            self._pool.shutdown(wait=True)
        self._pool = self._context = None

    def _map(self, partitions: list[tuple[list, list]], cfg: TronConfig) -> list:
        problems = [part[0] for part in partitions]
        x0s = [part[1] for part in partitions]
        if self._pool is None or len(partitions) == 1:
            return [_solve_partition(p, x, cfg) for p, x in zip(problems, x0s)]
        if self.backend == "process":
            return self._pool.starmap(_solve_partition, zip(problems, x0s, repeat(cfg)))
        return list(self._pool.map(_solve_partition, problems, x0s, repeat(cfg)))

    def solve(
        self,
        problems: Sequence[BoundedProblem],
        x0s: Sequence,
        cfg: TronConfig | None = None,
    ) -> BatchResult:
        """Solves every problem from its starting point.

        Args:
            problems (Sequence[BoundedProblem]): the problems
            x0s (Sequence): one starting point per problem
            cfg (TronConfig | None): solver settings shared by all problems

        Returns:
            BatchResult: reports in input order

        Raises:
            ContractViolationError: if the lengths differ, or the solver is used outside
                its context with more than one worker
        """
        if len(problems) != len(x0s):
            raise ContractViolationError(f"{len(problems)} problems but {len(x0s)} starting points")
        if self.workers > 1 and self._pool is None:
            raise ContractViolationError("BatchSolver with several workers must be used as a context manager")
        cfg = cfg or TronConfig()
        start = time.perf_counter()
        if not problems:
            return BatchResult([], [], 0.0, [])

        chunks = [idx for idx in np.array_split(np.arange(len(problems)), self.workers) if idx.size]
        partitions = [([problems[i] for i in idx], [np.asarray(x0s[i], dtype=float) for i in idx]) for idx in chunks]
        outputs = self._map(partitions, cfg)

        reports: list[SolveReport] = []
        per_problem_time: list[float] = []
        partition_times: list[float] = []
        for part_reports, part_times, part_time in outputs:
            reports.extend(part_reports)
            per_problem_time.extend(part_times)
            partition_times.append(part_time)
        result = BatchResult(reports, per_problem_time, time.perf_counter() - start, partition_times)
        LOGGER.debug(
            "solved %d problems on %d partitions in %.3fs (%d failures)",
            len(result),
            len(partition_times),
            result.batch_wall_time,
            result.failures,
        )
        return result


def solve_batch(
    problems: Sequence[BoundedProblem],
    x0s: Sequence,
    cfg: TronConfig | None = None,
    workers: int = 1,
    backend: str = "process",
) -> BatchResult:
    """Solves a batch on a pool that is torn down afterwards, see :class:`BatchSolver`."""
    with BatchSolver(workers, backend) as solver:
        return solver.solve(problems, x0s, cfg)


def make_hs45(n: int) -> Hs45Problem:
    """The hs45 problem of dimension ``n``, ``f(x) = 120 - prod(x)`` on ``0 <= x_i <= i``.

    Raises:
        CapacityError: if ``n`` is outside ``1..max_dimension``
    """
    return Hs45Problem(n)
