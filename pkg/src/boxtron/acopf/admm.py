"""Component-based ADMM for AC optimal power flow.

The network is split into generators, branches and buses. Generators and
branches own copies of the coupled quantities: generator output, branch end
flows, squared voltage magnitudes and angles. Buses own the consensus values
and enforce power balance. One iteration

1. updates every generator in closed form,
2. solves every branch subproblem with the trust-region solver, as one batch,
3. updates every bus in closed form,
4. moves the multipliers along the consensus gaps.

Costs are multiplied by ``obj_scale`` inside the iteration only; reported
objectives are in $/h.
"""
from __future__ import annotations

import dataclasses
import enum
import logging
import time
from typing import Mapping, Sequence

import numpy as np

import boxtron.config
from boxtron.acopf.branch import BranchParams, BranchSubproblem, branch_params, line_flows
from boxtron.acopf.case import Bus, GenCost, Generator, NetworkCase
from boxtron.batch import BatchSolver, ImbalanceStats, imbalance
from boxtron.errors import ContractViolationError, DegenerateBusError
from boxtron.tron import SolveReport, SolveStatus, TronConfig

LOGGER = logging.getLogger(__name__)

VOLTAGE_RHO_FACTOR = 4.0


@dataclasses.dataclass(frozen=True)
class AdmmOptions:
    """Settings of :func:`admm_solve`.

    Attributes:
        rho0: penalty of the power couplings
        rho_voltage: penalty of the voltage and angle couplings, ``4 * rho0`` if None
        max_iter: iteration limit
        tol_primal: primal residual tolerance
        tol_dual: dual residual tolerance
        workers: number of branch partitions solved in parallel
        backend: ``"process"`` or ``"thread"``
        obj_scale: factor applied to the generator costs during the iteration
        tron: settings of the branch solves
        log_every: log progress every that many iterations
    """

    rho0: float = 10.0
    rho_voltage: float | None = None
    max_iter: int = 5000
    tol_primal: float = 1e-4
    tol_dual: float = 1e-3
    workers: int = 1
    backend: str = "process"
    obj_scale: float = 1e-2
    tron: TronConfig = dataclasses.field(default_factory=TronConfig)
    log_every: int = 100

    def __post_init__(self):
        if not self.rho0 > 0:
            raise ContractViolationError(f"rho0 must be positive, got {self.rho0}")
        if self.rho_voltage is not None and not self.rho_voltage > 0:
            raise ContractViolationError(f"rho_voltage must be positive, got {self.rho_voltage}")
        if self.max_iter < 1:
            raise ContractViolationError(f"max_iter must be at least 1, got {self.max_iter}")
        if not (self.tol_primal > 0 and self.tol_dual > 0):
            raise ContractViolationError("residual tolerances must be positive")
        if self.workers < 1:
            raise ContractViolationError(f"workers must be at least 1, got {self.workers}")
        if not self.obj_scale > 0:
            raise ContractViolationError(f"obj_scale must be positive, got {self.obj_scale}")

    @property
    def rho_power(self) -> float:
        """Penalty of the power couplings."""
        return self.rho0

    @property
    def rho_volt(self) -> float:
        """Penalty of the voltage and angle couplings."""
        return self.rho_voltage if self.rho_voltage is not None else VOLTAGE_RHO_FACTOR * self.rho0

    @classmethod
    def from_config(cls, config: Mapping | None = None, **overrides) -> AdmmOptions:
        """Builds AdmmOptions from a boxtron :py:class:`~boxtron.config.Config`.

        Args:
            config (Mapping | None): config to read from, the global Configuration if None
            **overrides: field values that take precedence over the config

        Returns:
            AdmmOptions:
        """
        if config is None:
            config = boxtron.config.Configuration
        keys = {
            "rho0": "rho0",
            "admm_max_iter": "max_iter",
            "tol_primal": "tol_primal",
            "tol_dual": "tol_dual",
            "workers": "workers",
            "backend": "backend",
            "obj_scale": "obj_scale",
        }
        values = {field: config[key] for key, field in keys.items() if key in config}
        values["tron"] = TronConfig.from_config(config)
        values.update(overrides)
        return cls(**values)


class AdmmStatus(str, enum.Enum):
    """Outcome of :func:`admm_solve`."""

    CONVERGED = "converged"
    ITER_LIMIT = "iter_limit"


@dataclasses.dataclass
class AdmmState:
    """Copies, consensus values and multipliers of every coupling.

    Branch arrays have one row per branch. ``flows`` columns are
    ``(p_ij, q_ij, p_ji, q_ji)`` and ``volt`` columns ``(w_i, w_j, t_i, t_j)``,
    where ``i`` is the "from" and ``j`` the "to" end. Bus consensus values ``w_t``
    and ``theta_t`` are shared by all branches at a bus.
    """

    gen_bus: np.ndarray
    from_bus: np.ndarray
    to_bus: np.ndarray
    rho_power: float
    rho_volt: float

    pg: np.ndarray
    qg: np.ndarray
    pg_t: np.ndarray
    qg_t: np.ndarray
    lam_pg: np.ndarray
    lam_qg: np.ndarray

    flows: np.ndarray
    flows_t: np.ndarray
    lam_flows: np.ndarray

    volt: np.ndarray
    lam_volt: np.ndarray
    w_t: np.ndarray
    theta_t: np.ndarray

    branch_x: np.ndarray
    iteration: int = 0
    previous: dict | None = None

    def __post_init__(self):
        if not (self.rho_power > 0 and self.rho_volt > 0):
            raise ContractViolationError("penalties must be positive")
        ng, nl, nb = self.gen_bus.shape[0], self.from_bus.shape[0], self.w_t.shape[0]
        shapes = {
            "pg": (self.pg, (ng,)),
            "qg": (self.qg, (ng,)),
            "pg_t": (self.pg_t, (ng,)),
            "qg_t": (self.qg_t, (ng,)),
            "lam_pg": (self.lam_pg, (ng,)),
            "lam_qg": (self.lam_qg, (ng,)),
            "to_bus": (self.to_bus, (nl,)),
            "flows": (self.flows, (nl, 4)),
            "flows_t": (self.flows_t, (nl, 4)),
            "lam_flows": (self.lam_flows, (nl, 4)),
            "volt": (self.volt, (nl, 4)),
            "lam_volt": (self.lam_volt, (nl, 4)),
            "theta_t": (self.theta_t, (nb,)),
            "branch_x": (self.branch_x, (nl, 4)),
        }
        for name, (array, shape) in shapes.items():
            if np.shape(array) != shape:
                raise ContractViolationError(f"AdmmState.{name} has shape {np.shape(array)}, expected {shape}")

    @classmethod
    def initial(cls, case: NetworkCase, opts: AdmmOptions) -> AdmmState:
        """Flat start: ``v = 1`` (clipped to the bounds), ``t = 0``, generators mid-range, zero multipliers."""
        index = case.bus_index()
        gen_bus = np.array([index[gen.bus] for gen in case.generators], dtype=int)
        from_bus = np.array([index[br.from_bus] for br in case.branches], dtype=int)
        to_bus = np.array([index[br.to_bus] for br in case.branches], dtype=int)
        vmin = np.array([bus.vmin for bus in case.buses])
        vmax = np.array([bus.vmax for bus in case.buses])
        v = np.clip(1.0, vmin, vmax)

        branch_x = np.column_stack((v[from_bus], v[to_bus], np.zeros((len(from_bus), 2)))).reshape(-1, 4)
        params = [branch_params(br) for br in case.branches]
        flows = np.array([line_flows(p, *x) for p, x in zip(params, branch_x)]).reshape(-1, 4)
        volt = np.column_stack((branch_x[:, 0] ** 2, branch_x[:, 1] ** 2, branch_x[:, 2], branch_x[:, 3])).reshape(
            -1, 4
        )
        pg = np.array([(gen.pmin + gen.pmax) / 2.0 for gen in case.generators])
        qg = np.array([(gen.qmin + gen.qmax) / 2.0 for gen in case.generators])
        ng, nl, nb = len(gen_bus), len(from_bus), len(case.buses)
        return cls(
            gen_bus=gen_bus,
            from_bus=from_bus,
            to_bus=to_bus,
            rho_power=opts.rho_power,
            rho_volt=opts.rho_volt,
            pg=pg,
            qg=qg,
            pg_t=pg.copy(),
            qg_t=qg.copy(),
            lam_pg=np.zeros(ng),
            lam_qg=np.zeros(ng),
            flows=flows,
            flows_t=flows.copy(),
            lam_flows=np.zeros((nl, 4)),
            volt=volt,
            lam_volt=np.zeros((nl, 4)),
            w_t=v**2,
            theta_t=np.zeros(nb),
            branch_x=branch_x,
        )

    def volt_t(self) -> np.ndarray:
        """Consensus values seen by the branches, ``(w_t[i], w_t[j], t_t[i], t_t[j])`` per row."""
        return np.column_stack(
            (self.w_t[self.from_bus], self.w_t[self.to_bus], self.theta_t[self.from_bus], self.theta_t[self.to_bus])
        ).reshape(-1, 4)

    def consensus(self) -> dict:
        """Copy of all consensus values."""
        return {
            "pg_t": self.pg_t.copy(),
            "qg_t": self.qg_t.copy(),
            "flows_t": self.flows_t.copy(),
            "w_t": self.w_t.copy(),
            "theta_t": self.theta_t.copy(),
        }


@dataclasses.dataclass(frozen=True)
class BusConsensus:
    """Consensus values chosen by one bus update."""

    pg: np.ndarray
    qg: np.ndarray
    flow_p: np.ndarray
    flow_q: np.ndarray
    w: float
    theta: float


@dataclasses.dataclass
class IterationRecord:
    """One row of the ADMM history."""

    iteration: int
    primal: float
    dual: float
    objective: float
    partition_times: list[float]
    branch_failures: int
    wall_time: float


@dataclasses.dataclass(frozen=True)
class LineViolation:
    """A branch whose apparent power flow exceeds its rating."""

    branch: int
    from_bus: int
    to_bus: int
    flow: float
    limit: float


@dataclasses.dataclass
class AdmmResult:
    """Outcome of :func:`admm_solve`."""

    status: AdmmStatus
    state: AdmmState
    history: list[IterationRecord]
    reports: list[SolveReport]
    objective: float
    imbalance: ImbalanceStats | None
    line_violations: list[LineViolation]

    @property
    def iterations(self) -> int:
        """Number of completed iterations."""
        return len(self.history)

    @property
    def primal(self) -> float:
        """Final primal residual."""
        return self.history[-1].primal if self.history else float("nan")

    @property
    def dual(self) -> float:
        """Final dual residual."""
        return self.history[-1].dual if self.history else float("nan")

    def summary(self) -> dict:
        """JSON-ready summary of the run."""
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "objective": self.objective,
            "primal_residual": self.primal,
            "dual_residual": self.dual,
            "imbalance": self.imbalance.to_dict() if self.imbalance else None,
            "line_violations": [dataclasses.asdict(v) for v in self.line_violations],
            "pg": [float(p) for p in self.state.pg],
            "qg": [float(q) for q in self.state.qg],
        }


def generator_update(
    gen: Generator,
    cost: GenCost,
    lambda_p: float,
    rho_p: float,
    p_tilde: float,
    lambda_q: float,
    rho_q: float,
    q_tilde: float,
) -> tuple[float, float]:
    """Exact minimizer of one generator's augmented Lagrangian over its box.

    Active power minimizes ``c2 p^2 + c1 p + lambda_p (p - p_tilde) + rho_p (p - p_tilde)^2 / 2``
    and reactive power ``lambda_q (q - q_tilde) + rho_q (q - q_tilde)^2 / 2``.

    Raises:
        ContractViolationError: if ``rho_p``, ``rho_q`` or ``2 c2 + rho_p`` are not positive
    """
    if not (rho_p > 0 and rho_q > 0 and 2.0 * cost.c2 + rho_p > 0):
        raise ContractViolationError("generator update needs positive curvature")
    p = (rho_p * p_tilde - lambda_p - cost.c1) / (2.0 * cost.c2 + rho_p)
    q = (rho_q * q_tilde - lambda_q) / rho_q
    return float(np.clip(p, gen.pmin, gen.pmax)), float(np.clip(q, gen.qmin, gen.qmax))


def bus_update(
    bus: Bus,
    gen_p: tuple[Sequence[float], Sequence[float]],
    gen_q: tuple[Sequence[float], Sequence[float]],
    flow_p: tuple[Sequence[float], Sequence[float]],
    flow_q: tuple[Sequence[float], Sequence[float]],
    w: tuple[Sequence[float], Sequence[float]],
    theta: tuple[Sequence[float], Sequence[float]],
    rho_power: float,
    rho_volt: float,
    reference: bool = False,
) -> BusConsensus:
    """Consensus values of one bus in closed form.

    Every argument pair is ``(copies, multipliers)`` of the adjacent components.
    ``flow_p`` and ``flow_q`` are the flows leaving the bus on adjacent branches.
    With targets ``m = copy + multiplier / rho`` the update solves

        min sum rho / 2 (z - m)^2
        s.t. sum pg - sum flow_p - gs * w = pd
             sum qg - sum flow_q + bs * w = qd

    through one multiplier per balance row. ``w`` enters as a single variable
    whose target is the average of its copies' targets. The angle is the average
    of its copies' targets, or 0 at the reference bus.

    Raises:
        DegenerateBusError: if a balance row has no coefficients
    """
    rho_power, rho_volt = float(rho_power), float(rho_volt)

    def targets(pair, rho):
        copies, multipliers = (np.asarray(v, dtype=float).reshape(-1) for v in pair)
        return copies + multipliers / rho

    m_pg, m_qg = targets(gen_p, rho_power), targets(gen_q, rho_power)
    m_fp, m_fq = targets(flow_p, rho_power), targets(flow_q, rho_power)
    m_w, m_theta = targets(w, rho_volt), targets(theta, rho_volt)
    ng, nf = m_pg.size, m_fp.size

    has_w = m_w.size > 0
    w_target = float(m_w.mean()) if has_w else 1.0
    m = np.concatenate((m_pg, m_fp, m_qg, m_fq, [w_target] if has_w else []))
    weights = np.concatenate((np.full(2 * (ng + nf), rho_power), [rho_volt * m_w.size] if has_w else []))

    A = np.zeros((2, m.size))
    A[0, :ng] = 1.0
    A[0, ng : ng + nf] = -1.0
    A[1, ng + nf : 2 * ng + nf] = 1.0
    A[1, 2 * ng + nf : 2 * (ng + nf)] = -1.0
    rhs = np.array([bus.pd, bus.qd])
    if has_w:
        A[0, -1] = -bus.gs
        A[1, -1] = bus.bs
    else:
        rhs = rhs - np.array([-bus.gs, bus.bs]) * w_target
    for row, label in enumerate("PQ"):
        if not np.any(A[row]):
            raise DegenerateBusError(bus.id, label)

    scaled = A / weights
    mu = np.linalg.solve(scaled @ A.T, A @ m - rhs)
    z = m - scaled.T @ mu

    theta_value = 0.0 if reference or m_theta.size == 0 else float(m_theta.mean())
    return BusConsensus(
        pg=z[:ng],
        qg=z[ng + nf : 2 * ng + nf],
        flow_p=z[ng : ng + nf],
        flow_q=z[2 * ng + nf : 2 * (ng + nf)],
        w=float(z[-1]) if has_w else w_target,
        theta=theta_value,
    )


def multiplier_update(state: AdmmState) -> AdmmState:
    """Moves every multiplier by ``rho * (copy - consensus)``, in place."""
    state.lam_pg += state.rho_power * (state.pg - state.pg_t)
    state.lam_qg += state.rho_power * (state.qg - state.qg_t)
    state.lam_flows += state.rho_power * (state.flows - state.flows_t)
    state.lam_volt += state.rho_volt * (state.volt - state.volt_t())
    return state


def _max_abs(*arrays: np.ndarray) -> float:
    return max((float(np.max(np.abs(a))) for a in arrays if np.size(a)), default=0.0)


def residuals(state: AdmmState) -> tuple[float, float]:
    """Primal and dual residuals.

    The primal residual is the largest ``|copy - consensus|``, the dual residual
    the largest ``rho * |consensus - previous consensus|``.

    Raises:
        ContractViolationError: if no iteration has been completed
    """
    if state.previous is None:
        raise ContractViolationError("residuals need at least one completed iteration")
    primal = _max_abs(
        state.pg - state.pg_t,
        state.qg - state.qg_t,
        state.flows - state.flows_t,
        state.volt - state.volt_t(),
    )
    prev = state.previous
    dual = max(
        state.rho_power
        * _max_abs(state.pg_t - prev["pg_t"], state.qg_t - prev["qg_t"], state.flows_t - prev["flows_t"]),
        state.rho_volt * _max_abs(state.w_t - prev["w_t"], state.theta_t - prev["theta_t"]),
    )
    return primal, dual


class _Network:
    """Static data of a case as used by the iteration."""

    def __init__(self, case: NetworkCase):
        self.case = case
        self.params: list[BranchParams] = [branch_params(br) for br in case.branches]
        index = case.bus_index()
        nb = len(case.buses)
        self.reference = case.reference_bus()
        self.gens_at = [[] for _ in range(nb)]
        for g, gen in enumerate(case.generators):
            self.gens_at[index[gen.bus]].append(g)
        # (branch, end) pairs per bus, end 0 is "from" and 1 is "to"
        self.ends_at = [[] for _ in range(nb)]
        for k, br in enumerate(case.branches):
            self.ends_at[index[br.from_bus]].append((k, 0))
            self.ends_at[index[br.to_bus]].append((k, 1))
        self.v_bounds = [(bus.vmin, bus.vmax) for bus in case.buses]

    def subproblems(self, state: AdmmState) -> list[BranchSubproblem]:
        rho = np.array([state.rho_power] * 4 + [state.rho_volt] * 4)
        tilde = np.hstack((state.flows_t, state.volt_t()))
        lam = np.hstack((state.lam_flows, state.lam_volt))
        return [
            BranchSubproblem(
                params,
                self.v_bounds[state.from_bus[k]],
                self.v_bounds[state.to_bus[k]],
                lam[k],
                rho,
                tilde[k],
            )
            for k, params in enumerate(self.params)
        ]

    def bus_stage(self, state: AdmmState):
        for i, bus in enumerate(self.case.buses):
            gens = self.gens_at[i]
            branches = [k for k, _ in self.ends_at[i]]
            ends = [end for _, end in self.ends_at[i]]
            p_cols = [2 * end for end in ends]
            q_cols = [2 * end + 1 for end in ends]
            w_cols = ends
            t_cols = [2 + end for end in ends]
            result = bus_update(
                bus,
                (state.pg[gens], state.lam_pg[gens]),
                (state.qg[gens], state.lam_qg[gens]),
                (state.flows[branches, p_cols], state.lam_flows[branches, p_cols]),
                (state.flows[branches, q_cols], state.lam_flows[branches, q_cols]),
                (state.volt[branches, w_cols], state.lam_volt[branches, w_cols]),
                (state.volt[branches, t_cols], state.lam_volt[branches, t_cols]),
                state.rho_power,
                state.rho_volt,
                reference=i == self.reference,
            )
            state.pg_t[gens] = result.pg
            state.qg_t[gens] = result.qg
            state.flows_t[branches, p_cols] = result.flow_p
            state.flows_t[branches, q_cols] = result.flow_q
            state.w_t[i] = result.w
            state.theta_t[i] = result.theta

    def line_violations(self, state: AdmmState) -> list[LineViolation]:
        violations = []
        for k, br in enumerate(self.case.branches):
            if br.rate_a <= 0:
                continue
            flow = float(max(np.hypot(*state.flows[k, :2]), np.hypot(*state.flows[k, 2:])))
            if flow > br.rate_a * (1.0 + 1e-6):
                violations.append(LineViolation(k, br.from_bus, br.to_bus, flow, br.rate_a))
        return violations


def admm_solve(case: NetworkCase, opts: AdmmOptions | None = None) -> AdmmResult:
    """Runs the component ADMM on a network until both residuals are below tolerance.

    Branch subproblems are warm-started from the previous iteration's solution
    and solved on ``opts.workers`` partitions. Non-convergence is reported via
    the status.

    Args:
        case (NetworkCase): parsed network
        opts (AdmmOptions | None): settings, :py:meth:`AdmmOptions.from_config` if None

    Returns:
        AdmmResult:
    """
    opts = opts or AdmmOptions.from_config()
    network = _Network(case)
    state = AdmmState.initial(case, opts)
    scaled_costs = [GenCost(opts.obj_scale * c.c2, opts.obj_scale * c.c1, opts.obj_scale * c.c0) for c in case.gencost]
    history: list[IterationRecord] = []
    reports: list[SolveReport] = []
    status = AdmmStatus.ITER_LIMIT
    LOGGER.info(
        "ADMM on %s: %d buses, %d generators, %d branches, rho=(%g, %g), %d worker(s)",
        case.name or "case",
        len(case.buses),
        len(case.generators),
        len(case.branches),
        state.rho_power,
        state.rho_volt,
        opts.workers,
    )

    start = time.perf_counter()
    with BatchSolver(opts.workers, opts.backend) as solver:
        for iteration in range(1, opts.max_iter + 1):
            state.iteration = iteration
            for g, (gen, cost) in enumerate(zip(case.generators, scaled_costs)):
                state.pg[g], state.qg[g] = generator_update(
                    gen,
                    cost,
                    state.lam_pg[g],
                    state.rho_power,
                    state.pg_t[g],
                    state.lam_qg[g],
                    state.rho_power,
                    state.qg_t[g],
                )

            batch = solver.solve(network.subproblems(state), list(state.branch_x), opts.tron)
            reports = batch.reports
            failures = 0
            for k, (params, report) in enumerate(zip(network.params, reports)):
                if report.status is SolveStatus.FACTORIZATION_FAILED:
                    failures += 1
                x = report.x_star
                state.branch_x[k] = x
                state.flows[k] = line_flows(params, *x)
                state.volt[k] = (x[0] ** 2, x[1] ** 2, x[2], x[3])
            if failures:
                LOGGER.warning("iteration %d: %d branch solve(s) failed to factorize", iteration, failures)

            state.previous = state.consensus()
            network.bus_stage(state)
            multiplier_update(state)
            primal, dual = residuals(state)

            record = IterationRecord(
                iteration=iteration,
                primal=primal,
                dual=dual,
                objective=case.total_cost(state.pg),
                partition_times=list(batch.partition_times),
                branch_failures=failures,
                wall_time=time.perf_counter() - start,
            )
            history.append(record)
            if iteration % opts.log_every == 0 or iteration == 1:
                LOGGER.info(
                    "iter %5d  primal %.3e  dual %.3e  objective %.4f", iteration, primal, dual, record.objective
                )
            if primal <= opts.tol_primal and dual <= opts.tol_dual:
                status = AdmmStatus.CONVERGED
                break

    rows = [record.partition_times for record in history]
    stats = None
    if opts.workers >= 2 and rows and all(len(row) >= 2 and len(row) == len(rows[0]) for row in rows):
        stats = imbalance(rows)

    violations = network.line_violations(state)
    for v in violations:
        LOGGER.warning(
            "branch %d (%d->%d) carries %.4f p.u., above its rating %.4f p.u.",
            v.branch,
            v.from_bus,
            v.to_bus,
            v.flow,
            v.limit,
        )
    result = AdmmResult(
        status=status,
        state=state,
        history=history,
        reports=reports,
        objective=case.total_cost(state.pg),
        imbalance=stats,
        line_violations=violations,
    )
    if status is AdmmStatus.CONVERGED:
        LOGGER.info("ADMM converged after %d iterations, objective %.4f $/h", result.iterations, result.objective)
    else:
        LOGGER.warning(
            "ADMM stopped after %d iterations: primal %.3e, dual %.3e", result.iterations, result.primal, result.dual
        )
    return result
