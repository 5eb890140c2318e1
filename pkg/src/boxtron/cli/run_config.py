"""Settings of one command line run."""
from __future__ import annotations

import dataclasses
from pathlib import Path

import boxtron.config
from boxtron.errors import ContractViolationError

MODES = ("bench", "admm")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Everything ``boxtron bench`` and ``boxtron admm`` need.

    ``mode`` is the name of the sub-command. Fields that do not apply to a mode
    are ignored by it.
    """

    mode: str
    output_dir: Path = Path(".")
    case_path: str | None = None
    n: int = 8
    batch_size: int = 100
    workers: int = 1
    backend: str = "process"
    rho0: float = 10.0
    max_iter: int = 5000
    tol_primal: float = 1e-4
    tol_dual: float = 1e-3
    tol_pg: float = 1e-6
    seed: int = 0

    def validate(self):
        """Checks the mode specific fields.

        Raises:
            ContractViolationError: with a message for the user
        """
        if self.mode not in MODES:
            raise ContractViolationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.workers < 1:
            raise ContractViolationError(f"--workers must be positive, got {self.workers}")
        if not self.tol_pg > 0:
            raise ContractViolationError(f"--tol-pg must be positive, got {self.tol_pg}")
        if self.mode == "bench":
            capacity = boxtron.config.Configuration["max_dimension"]
            if not 1 <= self.n <= capacity:
                raise ContractViolationError(f"--n must lie in 1..{capacity}, got {self.n}")
            if self.batch_size < 0:
                raise ContractViolationError(f"--batch must be nonnegative, got {self.batch_size}")
        else:
            if not self.case_path:
                raise ContractViolationError("--case is required")
            for name, value in (("--rho0", self.rho0), ("--tol-primal", self.tol_primal), ("--tol-dual", self.tol_dual)):
                if not value > 0:
                    raise ContractViolationError(f"{name} must be positive, got {value}")
            if self.max_iter < 1:
                raise ContractViolationError(f"--max-iter must be positive, got {self.max_iter}")
