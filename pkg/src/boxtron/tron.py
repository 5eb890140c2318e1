"""Trust-region Newton method for bound-constrained programs.

Solves ``min f(x) subject to l <= x <= u`` for small dense problems. Each outer
iteration computes a projected-gradient Cauchy step, improves it on the free
variables with a Cholesky-preconditioned Steihaug conjugate gradient method
followed by a projected line search, and updates the trust region with a
ratio test.

Example:
    >>> from boxtron.problems import Hs45Problem
    >>> problem = Hs45Problem(3)
    >>> report = solve(problem, problem.default_start())
    >>> report.x_star
    array([1., 2., 3.])

"""
from __future__ import annotations

import dataclasses
import enum
import logging
import math
import time
from typing import Callable, Mapping

import numpy as np

import boxtron.config
from boxtron.errors import (
    CapacityError,
    ContractViolationError,
    EvaluationError,
    FactorizationError,
    NoIntersectionError,
)
from boxtron.linalg import ccf, dot, gemv, nrm2, trtrs

LOGGER = logging.getLogger(__name__)

MAX_SEARCH_STEPS = 100


class BoundedProblem:
    """One instance of ``min f(x) subject to lower <= x <= upper``.

    Subclasses implement :meth:`eval_f`, :meth:`eval_grad` and :meth:`eval_hess`.
    Infinite bounds are allowed and mean the side is unbounded.

    Instances are shipped to worker processes by :mod:`boxtron.batch`, so
    subclasses used with the process backend must be picklable.
    """

    def __init__(self, lower, upper, capacity: int | None = None):
        """Validates and stores the box.

        Args:
            lower (array-like): lower bounds, ``-inf`` for none
            upper (array-like): upper bounds, ``+inf`` for none
            capacity (int | None): maximum dimension, config key ``max_dimension`` if None

        Raises:
            CapacityError: if the dimension is not within ``1..capacity``
            ContractViolationError: if the bounds are inconsistent
        """
        lower = np.array(lower, dtype=float)
        upper = np.array(upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ContractViolationError(f"bounds must be vectors of equal length, got {lower.shape} and {upper.shape}")
        if capacity is None:
            capacity = boxtron.config.Configuration["max_dimension"]
        if not 1 <= lower.shape[0] <= capacity:
            raise CapacityError(lower.shape[0], capacity)
        if np.isnan(lower).any() or np.isnan(upper).any():
            raise ContractViolationError("bounds must not be NaN")
        if np.any(lower > upper):
            raise ContractViolationError("lower bound exceeds upper bound")
        self.lower = lower
        self.upper = upper

    @property
    def dim(self) -> int:
        """Number of variables."""
        return self.lower.shape[0]

    def eval_f(self, x: np.ndarray) -> float:
        """Objective value at ``x``."""
        raise NotImplementedError

    def eval_grad(self, x: np.ndarray) -> np.ndarray:
        """Gradient at ``x``."""
        raise NotImplementedError

    def eval_hess(self, x: np.ndarray) -> np.ndarray:
        """Dense symmetric Hessian at ``x``."""
        raise NotImplementedError

    def project(self, x) -> np.ndarray:
        """Projects ``x`` onto the box."""
        return np.clip(np.asarray(x, dtype=float), self.lower, self.upper)


class CallableProblem(BoundedProblem):
    """BoundedProblem assembled from three callables.

    Lambdas and closures do not pickle, use the thread backend when batching these.
    """

    def __init__(
        self,
        f: Callable[[np.ndarray], float],
        grad: Callable[[np.ndarray], np.ndarray],
        hess: Callable[[np.ndarray], np.ndarray],
        lower,
        upper,
        capacity: int | None = None,
    ):
        super().__init__(lower, upper, capacity)
        self._f = f
        self._grad = grad
        self._hess = hess

    def eval_f(self, x: np.ndarray) -> float:  # noqa: D102
        return float(self._f(x))

    def eval_grad(self, x: np.ndarray) -> np.ndarray:  # noqa: D102
        return np.asarray(self._grad(x), dtype=float)

    def eval_hess(self, x: np.ndarray) -> np.ndarray:  # noqa: D102
        return np.asarray(self._hess(x), dtype=float)


@dataclasses.dataclass(frozen=True)
class TronConfig:
    """Solver tolerances and trust-region constants.

    Attributes:
        tol_pg: convergence tolerance on the infinity norm of the projected gradient
        delta0: initial trust-region radius, ``max(||g0||, 1)`` if None
        max_iter: maximum number of outer iterations
        cg_tol: relative residual tolerance of the conjugate gradient method
        eta0: minimum ratio of actual to predicted reduction for accepting a step
        eta1: below this ratio the radius shrinks
        eta2: above this ratio the radius grows
        sigma1: smallest radius reduction factor
        sigma2: largest radius reduction factor
        sigma3: radius expansion factor
        delta_max: upper limit of the radius
        mu0: sufficient decrease constant of the Cauchy and line searches
        mu1: Cauchy steps stay within ``mu1 * delta``
        interp: backtracking factor of the Cauchy and line searches
        extrap: extrapolation factor of the Cauchy search
    """

    tol_pg: float = 1e-6
    delta0: float | None = None
    max_iter: int = 200
    cg_tol: float = 0.1
    eta0: float = 1e-4
    eta1: float = 0.25
    eta2: float = 0.75
    sigma1: float = 0.25
    sigma2: float = 0.5
    sigma3: float = 4.0
    delta_max: float = 1e10
    mu0: float = 1e-2
    mu1: float = 1.0
    interp: float = 0.5
    extrap: float = 10.0

    def __post_init__(self):
        if not self.tol_pg > 0:
            raise ContractViolationError(f"tol_pg must be positive, got {self.tol_pg}")
        if not 0 < self.sigma1 < self.sigma2 < 1 < self.sigma3:
            raise ContractViolationError("trust-region factors must satisfy 0 < sigma1 < sigma2 < 1 < sigma3")
        if not 0 < self.eta0 < self.eta1 <= self.eta2 < 1:
            raise ContractViolationError("ratio thresholds must satisfy 0 < eta0 < eta1 <= eta2 < 1")
        if self.delta0 is not None and not self.delta0 > 0:
            raise ContractViolationError(f"delta0 must be positive, got {self.delta0}")
        if self.max_iter < 0:
            raise ContractViolationError(f"max_iter must be nonnegative, got {self.max_iter}")
        if not 0 < self.cg_tol < 1:
            raise ContractViolationError(f"cg_tol must lie in (0, 1), got {self.cg_tol}")
        if not (0 < self.mu0 < 1 and self.mu1 > 0 and 0 < self.interp < 1 and self.extrap > 1):
            raise ContractViolationError("invalid Cauchy or line-search constants")

    @classmethod
    def from_config(cls, config: Mapping | None = None, **overrides) -> TronConfig:
        """Builds a TronConfig from a boxtron :py:class:`~boxtron.config.Config`.

        Args:
            config (Mapping | None): config to read ``tol_pg``, ``max_iter`` and ``cg_tol`` from,
                the global Configuration if None
            **overrides: field values that take precedence over the config

        Returns:
            TronConfig:
        """
        if config is None:
            config = boxtron.config.Configuration
        values = {key: config[key] for key in ("tol_pg", "max_iter", "cg_tol") if key in config}
        values.update(overrides)
        return cls(**values)


class SolveStatus(str, enum.Enum):
    """Outcome of a solve."""

    CONVERGED = "converged"
    ITER_LIMIT = "iter_limit"
    FACTORIZATION_FAILED = "factorization_failed"


@dataclasses.dataclass(eq=False)
class SolveReport:
    """Result of :func:`solve`.

    Two reports compare equal when everything but ``wall_time`` matches.
    """

    x_star: np.ndarray
    f_star: float
    pg_norm: float
    status: SolveStatus
    iterations: int
    cg_iterations: int
    f_evals: int
    minor_iterations: int
    delta: float
    wall_time: float

    @property
    def converged(self) -> bool:
        """True if the projected gradient tolerance was met."""
        return self.status is SolveStatus.CONVERGED

    def __eq__(self, other):
        if not isinstance(other, SolveReport):
            return NotImplemented
        return (
            np.array_equal(self.x_star, other.x_star)
            and self.f_star == other.f_star
            and self.pg_norm == other.pg_norm
            and self.status == other.status
            and self.iterations == other.iterations
            and self.cg_iterations == other.cg_iterations
            and self.f_evals == other.f_evals
            and self.minor_iterations == other.minor_iterations
            and self.delta == other.delta
        )

    __hash__ = None


class CGInfo(str, enum.Enum):
    """Why :func:`precond_cg` stopped."""

    CONVERGED = "converged"
    BOUNDARY = "boundary"
    NEG_CURVE = "neg_curve"
    ITER_CAP = "iter_cap"


@dataclasses.dataclass
class CGResult:
    """Step and diagnostics of :func:`precond_cg`.

    ``step`` is in original coordinates, ``scaled_step`` in preconditioned ones.
    ``residual`` is relative to the norm of the preconditioned right hand side.
    """

    step: np.ndarray
    scaled_step: np.ndarray
    info: CGInfo
    iterations: int
    residual: float


def _projected_gradient(x: np.ndarray, g: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    pg = np.array(g, dtype=float)
    at_lower = x <= lower
    at_upper = x >= upper
    pg[at_lower] = np.minimum(pg[at_lower], 0.0)
    pg[at_upper] = np.maximum(pg[at_upper], 0.0)
    return pg


def projected_gradient_norm(p: BoundedProblem, x, g=None) -> float:
    """Infinity norm of the projected gradient.

    Component ``i`` is ``g_i`` for interior ``x_i``, ``min(g_i, 0)`` at the lower
    bound and ``max(g_i, 0)`` at the upper bound, so fixed variables contribute 0.

    Args:
        p (BoundedProblem): the problem
        x (array-like): a point in the box
        g (array-like | None): gradient at ``x``, evaluated if None

    Returns:
        float:
    """
    x = np.asarray(x, dtype=float)
    if g is None:
        g = p.eval_grad(x)
    pg = _projected_gradient(x, np.asarray(g, dtype=float), p.lower, p.upper)
    return float(np.max(np.abs(pg))) if pg.size else 0.0


def gpstep(x, alpha: float, w, lower, upper) -> np.ndarray:
    """Returns the projected step ``P[x + alpha * w] - x``."""
    x = np.asarray(x, dtype=float)
    return np.clip(x + alpha * np.asarray(w, dtype=float), lower, upper) - x


def breakpt(x, w, lower, upper) -> tuple[int, float, float]:
    """Breakpoints of the ray ``x + t * w`` with the finite bounds.

    Returns:
        tuple[int, float, float]: number of breakpoints, smallest and largest
            breakpoint, ``(0, 0, 0)`` if there are none
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    up = (w > 0) & (x < upper) & np.isfinite(upper)
    down = (w < 0) & (x > lower) & np.isfinite(lower)
    steps = np.concatenate(((upper[up] - x[up]) / w[up], (lower[down] - x[down]) / w[down]))
    if steps.size == 0:
        return 0, 0.0, 0.0
    brptmin, brptmax = float(np.min(steps)), float(np.max(steps))
    LOGGER.debug("breakpoints: %d in [%.1e, %.1e]", steps.size, brptmin, brptmax)
    return int(steps.size), brptmin, brptmax


def _model(g: np.ndarray, A: np.ndarray, s: np.ndarray) -> tuple[float, float]:
    gts = dot(g, s)
    q = gts + 0.5 * dot(s, gemv(1.0, A, s))
    if not (math.isfinite(q) and math.isfinite(gts)):
        raise EvaluationError(f"quadratic model is not finite (q={q}, g's={gts})")
    return q, gts


def cauchy(
    p: BoundedProblem,
    x,
    g,
    A,
    delta: float,
    alpha: float = 1.0,
    cfg: TronConfig | None = None,
) -> tuple[float, np.ndarray]:
    """Computes a Cauchy step along the projected steepest descent path.

    The step ``s = P[x - alpha * g] - x`` satisfies ``||s|| <= mu1 * delta`` and
    ``q(s) <= mu0 * g's`` with ``q(s) = g's + s'As / 2``. Starting from ``alpha``
    the search backtracks until both hold, or extrapolates while they keep
    holding and ``alpha`` has not passed the last breakpoint.

    Args:
        p (BoundedProblem): the problem, for its bounds
        x (array-like): current point
        g (array-like): gradient at ``x``
        A (array-like): Hessian at ``x``
        delta (float): trust-region radius
        alpha (float): initial step length, usually the previous Cauchy ``alpha``
        cfg (TronConfig | None): constants

    Returns:
        tuple[float, np.ndarray]: ``alpha`` and the step ``s``

    Raises:
        EvaluationError: if the model is not finite
    """
    cfg = cfg or TronConfig()
    x = np.asarray(x, dtype=float)
    g = np.asarray(g, dtype=float)
    if nrm2(g) == 0.0:
        return alpha, np.zeros_like(x)
    radius = cfg.mu1 * delta

    def acceptable(step: np.ndarray) -> bool:
        if nrm2(step) > radius:
            return False
        q, gts = _model(g, A, step)
        return q <= cfg.mu0 * gts

    _, _, brptmax = breakpt(x, -g, p.lower, p.upper)
    s = gpstep(x, -alpha, g, p.lower, p.upper)

    if not acceptable(s):
        for _ in range(MAX_SEARCH_STEPS):
            alpha *= cfg.interp
            s = gpstep(x, -alpha, g, p.lower, p.upper)
            if acceptable(s):
                break
    else:
        best = alpha
        while alpha <= brptmax:
            alpha *= cfg.extrap
            if not acceptable(gpstep(x, -alpha, g, p.lower, p.upper)):
                break
            best = alpha
        alpha = best
        s = gpstep(x, -alpha, g, p.lower, p.upper)
    return alpha, s


def select_free_set(x_c, lower, upper) -> np.ndarray:
    """Sorted indices of the components strictly inside their bounds."""
    x_c = np.asarray(x_c, dtype=float)
    return np.flatnonzero((x_c > lower) & (x_c < upper))


def trqsol(x, w, delta: float) -> float:
    """Nonnegative root ``sigma`` of ``||x + sigma * w|| = delta``.

    Requires ``||x|| <= delta``.

    Raises:
        NoIntersectionError: if ``w`` is zero
    """
    ptp = dot(w, w)
    if ptp == 0.0:
        raise NoIntersectionError("trqsol: the direction is zero and never reaches the boundary")
    ptx = dot(w, x)
    xtx = dot(x, x)
    dsq = delta * delta
    rad = math.sqrt(max(ptx * ptx + ptp * (dsq - xtx), 0.0))
    if ptx > 0:
        return max((dsq - xtx) / (ptx + rad), 0.0)
    return max((rad - ptx) / ptp, 0.0)


def precond_cg(
    A,
    g_F,
    L,
    delta: float,
    cfg: TronConfig | None = None,
    itermax: int | None = None,
) -> CGResult:
    """Preconditioned Steihaug conjugate gradient method.

    Approximately minimizes ``g's + s'As / 2`` subject to ``||L^T s|| <= delta``
    by running conjugate gradients on ``A_hat = L^-1 A L^-T`` with right hand
    side ``b_hat = -L^-1 g``. Products with ``A_hat`` are two triangular
    solves around one matrix-vector product.

    Stops when the relative residual drops to ``cg_tol``, when an iterate would
    leave the trust region, on nonpositive curvature, or after ``itermax``
    (default: dimension) iterations.

    Args:
        A (array-like): symmetric matrix of the reduced model
        g_F (array-like): gradient of the reduced model
        L (array-like): Cholesky factor of ``A + alpha I`` from :func:`~boxtron.linalg.ccf`
        delta (float): trust-region radius in the preconditioned norm
        cfg (TronConfig | None): constants, for ``cg_tol``
        itermax (int | None): iteration limit

    Returns:
        CGResult:
    """
    cfg = cfg or TronConfig()
    g_F = np.asarray(g_F, dtype=float)
    n = g_F.shape[0]
    itermax = n if itermax is None else itermax

    def matvec(v: np.ndarray) -> np.ndarray:
        return trtrs(L, gemv(1.0, A, trtrs(L, v, transpose=True)))

    def result(s_hat: np.ndarray, info: CGInfo, iterations: int, rnorm: float) -> CGResult:
        return CGResult(
            step=trtrs(L, s_hat, transpose=True),
            scaled_step=s_hat,
            info=info,
            iterations=iterations,
            residual=rnorm / bnorm if bnorm > 0 else 0.0,
        )

    b = -trtrs(L, g_F)
    bnorm = nrm2(b)
    s = np.zeros(n)
    if bnorm == 0.0:
        return result(s, CGInfo.CONVERGED, 0, 0.0)

    tol = cfg.cg_tol * bnorm
    r = b.copy()
    d = r.copy()
    rho = dot(r, r)
    for iteration in range(1, itermax + 1):
        q = matvec(d)
        dtq = dot(d, q)
        sigma = trqsol(s, d, delta)
        if dtq <= 0:
            s = s + sigma * d
            return result(s, CGInfo.NEG_CURVE, iteration, nrm2(r))
        alpha = rho / dtq
        if alpha >= sigma:
            s = s + sigma * d
            return result(s, CGInfo.BOUNDARY, iteration, nrm2(r))
        s = s + alpha * d
        r = r - alpha * q
        rtr = dot(r, r)
        if math.sqrt(rtr) <= tol:
            return result(s, CGInfo.CONVERGED, iteration, math.sqrt(rtr))
        d = r + (rtr / rho) * d
        rho = rtr
    return result(s, CGInfo.ITER_CAP, itermax, nrm2(r))


def projected_line_search(
    p: BoundedProblem,
    x,
    w,
    g,
    A,
    cfg: TronConfig | None = None,
) -> tuple[float, np.ndarray]:
    """Projected backtracking search on the quadratic model.

    Tries ``beta = 1, interp, interp**2, ...`` until the step
    ``s = P[x + beta * w] - x`` satisfies ``q(s) <= mu0 * g's``. When a
    backtrack would jump over the first breakpoint, the first breakpoint is
    tried before it. Every returned step passed the test; if none did within
    the step limit the search returns ``beta = 0`` and ``x`` itself.

    Args:
        p (BoundedProblem): the problem, for its bounds
        x (array-like): current point
        w (array-like): descent direction of the model
        g (array-like): model gradient at ``x``
        A (array-like): model Hessian
        cfg (TronConfig | None): constants

    Returns:
        tuple[float, np.ndarray]: ``beta`` and the projected point ``x_next``
    """
    cfg = cfg or TronConfig()
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if nrm2(w) == 0.0:
        return 1.0, x.copy()

    def sufficient(beta: float) -> bool:
        q, gts = _model(g, A, gpstep(x, beta, w, p.lower, p.upper))
        return q <= cfg.mu0 * gts

    _, brptmin, _ = breakpt(x, w, p.lower, p.upper)
    beta = 1.0
    for _ in range(MAX_SEARCH_STEPS):
        if sufficient(beta):
            return beta, p.project(x + beta * w)
        next_beta = beta * cfg.interp
        if next_beta < brptmin < beta and sufficient(brptmin):
            return brptmin, p.project(x + brptmin * w)
        beta = next_beta
    LOGGER.debug("projected search found no decrease along a direction of norm %.2e", nrm2(w))
    return 0.0, x.copy()


@dataclasses.dataclass
class _SubspaceResult:
    x: np.ndarray
    minor_iterations: int
    cg_iterations: int


class TronSolver:
    """Trust-region Newton solver for one problem at a time.

    The solver owns the counters of the solve in progress; use one instance per
    thread.
    """

    def __init__(self, config: TronConfig | None = None):
        self.config = config or TronConfig()
        self._reset()

    def _reset(self):
        self.iterations = 0
        self.cg_iterations = 0
        self.minor_iterations = 0
        self.f_evals = 0

    def _subspace_step(
        self, p: BoundedProblem, x: np.ndarray, g: np.ndarray, A: np.ndarray, s: np.ndarray, delta: float
    ) -> _SubspaceResult:
        """Improves the Cauchy step ``s`` on the free variables.

        Each minor iteration solves the trust-region subproblem restricted to the
        current free set and follows it with a projected search, so at least one
        more variable becomes active unless the face is solved. At most ``n``
        minor iterations run.
        """
        cfg = self.config
        xk = p.project(x + s)
        minor = cg_total = 0
        q_prev = _model(g, A, xk - x)[0]
        for _ in range(p.dim):
            free = select_free_set(xk, p.lower, p.upper)
            if free.size == 0:
                break
            model_grad = g + gemv(1.0, A, xk - x)
            g_free = model_grad[free]
            gfnorm = nrm2(g_free)
            if gfnorm == 0.0:
                break

            A_free = A[np.ix_(free, free)]
            L, shift = ccf(A_free)
            cg = precond_cg(A_free, g_free, L, delta, cfg)
            cg_total += cg.iterations

            w = np.zeros(p.dim)
            w[free] = cg.step
            beta, x_next = projected_line_search(p, xk, w, model_grad, A, cfg)
            minor += 1

            q_next = _model(g, A, x_next - x)[0]
            if beta == 0.0 or q_next > q_prev:
                break
            xk, q_prev = x_next, q_next
            LOGGER.debug(
                "minor %d: |F|=%d shift=%.1e cg=%d (%s) q=%.6e",
                minor,
                free.size,
                shift,
                cg.iterations,
                cg.info.value,
                q_next,
            )

            if nrm2((g + gemv(1.0, A, xk - x))[free]) <= cfg.cg_tol * gfnorm:
                break
            if cg.info in (CGInfo.BOUNDARY, CGInfo.NEG_CURVE):
                break
        return _SubspaceResult(xk, minor, cg_total)

    def _update_radius(self, delta: float, ratio: float, snorm: float, slope: float, actred: float) -> float:
        cfg = self.config
        curvature = actred - slope
        if curvature <= 0:
            alpha = cfg.sigma3
        else:
            alpha = max(cfg.sigma1, -0.5 * slope / curvature)

        if ratio <= cfg.eta0:
            delta = min(max(alpha, cfg.sigma1), cfg.sigma2) * delta
        elif ratio < cfg.eta1:
            delta = max(cfg.sigma1 * delta, min(alpha * snorm, cfg.sigma2 * delta))
        elif ratio >= cfg.eta2:
            delta = cfg.sigma3 * delta
        return min(delta, cfg.delta_max)

    def solve(self, p: BoundedProblem, x0) -> SolveReport:
        """Runs the trust-region Newton method from ``x0``.

        ``x0`` is projected onto the box first. The Hessian is evaluated at the
        start and after every accepted step.

        Args:
            p (BoundedProblem): the problem
            x0 (array-like): starting point

        Returns:
            SolveReport:
        """
        cfg = self.config
        self._reset()
        start = time.perf_counter()

        x0 = np.asarray(x0, dtype=float)
        if x0.shape != (p.dim,):
            raise ContractViolationError(f"x0 has shape {x0.shape}, the problem has dimension {p.dim}")
        x = p.project(x0)
        f = p.eval_f(x)
        self.f_evals += 1
        g = p.eval_grad(x)
        A = p.eval_hess(x)
        delta = cfg.delta0 if cfg.delta0 is not None else max(nrm2(g), 1.0)
        alphac = 1.0
        pg = projected_gradient_norm(p, x, g)

        while True:
            if pg <= cfg.tol_pg:
                status = SolveStatus.CONVERGED
                break
            if self.iterations >= cfg.max_iter:
                status = SolveStatus.ITER_LIMIT
                break
            self.iterations += 1

            try:
                alphac, s = cauchy(p, x, g, A, delta, alphac, cfg)
                sub = self._subspace_step(p, x, g, A, s, delta)
            except FactorizationError as e:
                LOGGER.debug("iteration %d: %s", self.iterations, e)
                status = SolveStatus.FACTORIZATION_FAILED
                break
            self.minor_iterations += sub.minor_iterations
            self.cg_iterations += sub.cg_iterations

            x_trial = sub.x
            s = x_trial - x
            snorm = nrm2(s)
            prered, slope = _model(g, A, s)
            f_trial = p.eval_f(x_trial)
            self.f_evals += 1

            if self.iterations == 1 and snorm > 0:
                delta = min(delta, snorm)

            if math.isfinite(f_trial):
                actred = f_trial - f
                ratio = actred / prered if prered < 0 else -math.inf
                delta = self._update_radius(delta, ratio, snorm, slope, actred)
            else:
                ratio = -math.inf
                delta = cfg.sigma1 * delta

            accepted = ratio > cfg.eta0 and f_trial < f
            LOGGER.debug(
                "iter %d: f=%.8e pg=%.2e |s|=%.2e ratio=%.2e delta=%.2e %s",
                self.iterations,
                f,
                pg,
                snorm,
                ratio,
                delta,
                "acc" if accepted else "rej",
            )
            if accepted:
                x, f = x_trial, f_trial
                g = p.eval_grad(x)
                A = p.eval_hess(x)
                pg = projected_gradient_norm(p, x, g)

        return SolveReport(
            x_star=x,
            f_star=float(f),
            pg_norm=float(pg),
            status=status,
            iterations=self.iterations,
            cg_iterations=self.cg_iterations,
            f_evals=self.f_evals,
            minor_iterations=self.minor_iterations,
            delta=float(delta),
            wall_time=time.perf_counter() - start,
        )


def solve(p: BoundedProblem, x0, cfg: TronConfig | None = None) -> SolveReport:
    """Solves one bound-constrained problem, see :class:`TronSolver`."""
    return TronSolver(cfg).solve(p, x0)
