"""Batch trust-region Newton solver for small bound-constrained problems, with an ACOPF ADMM driver."""
from boxtron.__about__ import __version__
from boxtron.batch import BatchResult, BatchSolver, ImbalanceStats, imbalance, make_hs45, solve_batch
from boxtron.config import INITIAL_CONFIG, Config, Configuration
from boxtron.problems import BoxQuadratic, Hs45Problem
from boxtron.tron import (
    BoundedProblem,
    CallableProblem,
    SolveReport,
    SolveStatus,
    TronConfig,
    TronSolver,
    solve,
)

__all__ = [
    "__version__",
    "BatchResult",
    "BatchSolver",
    "BoundedProblem",
    "BoxQuadratic",
    "CallableProblem",
    "Config",
    "Configuration",
    "Hs45Problem",
    "INITIAL_CONFIG",
    "ImbalanceStats",
    "SolveReport",
    "SolveStatus",
    "TronConfig",
    "TronSolver",
    "imbalance",
    "make_hs45",
    "solve",
    "solve_batch",
]
