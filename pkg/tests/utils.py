"""Independent oracles the solver results are checked against."""
import cmath
import itertools
import math
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from boxtron.acopf.case import Branch, NetworkCase

TEST_FOLDER = Path(__file__).parent.resolve()

TWO_BUS_CASE = """function mpc = two_bus
mpc.version = '2';
mpc.baseMVA = 100;
%% bus data
mpc.bus = [
\t1\t3\t0\t0\t0\t0\t1\t1\t0\t345\t1\t1.1\t0.9;
\t2\t1\t%(pd)s\t%(qd)s\t0\t0\t1\t1\t0\t345\t1\t1.1\t0.9;
];
%% generator data
mpc.gen = [
\t1\t0\t0\t%(qmax)s\t%(qmin)s\t1\t100\t1\t%(pmax)s\t%(pmin)s;
];
%% branch data
mpc.branch = [
\t1\t2\t%(r)s\t%(x)s\t%(b)s\t0\t0\t0\t0\t0\t1\t-360\t360;
];
%% generator cost data
mpc.gencost = [
\t2\t0\t0\t3\t%(c2)s\t%(c1)s\t0;
];
"""


def two_bus_case_text(
    pd=50.0, qd=20.0, r=0.01, x=0.1, b=0.0, pmin=0.0, pmax=200.0, qmin=-100.0, qmax=100.0, c2=0.01, c1=10.0
) -> str:
    """MATPOWER text of a generator bus feeding a load bus over one line."""
    return TWO_BUS_CASE % dict(pd=pd, qd=qd, r=r, x=x, b=b, pmin=pmin, pmax=pmax, qmin=qmin, qmax=qmax, c2=c2, c1=c1)


def box_qp_oracle(H: np.ndarray, c: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Minimizer of ``(x - c)' H (x - c) / 2`` over a box by enumerating active sets.

    Every variable is either at its lower bound, at its upper bound or free; the
    free part follows from the stationarity condition. H must be positive definite.
    """
    n = c.shape[0]
    best, best_value = None, math.inf
    for pattern in itertools.product((-1, 0, 1), repeat=n):
        x = np.where(np.array(pattern) < 0, lower, np.where(np.array(pattern) > 0, upper, 0.0))
        free = np.array([k == 0 for k in pattern])
        fixed = ~free
        if free.any():
            rhs = H[np.ix_(free, fixed)] @ (x[fixed] - c[fixed])
            x[free] = c[free] - np.linalg.solve(H[np.ix_(free, free)], rhs)
        if np.any(x < lower - 1e-12) or np.any(x > upper + 1e-12):
            continue
        value = 0.5 * (x - c) @ H @ (x - c)
        if value < best_value:
            best, best_value = x, value
    return best


def random_spd(rng: np.random.Generator, n: int, condition: float = 10.0) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return q @ np.diag(np.linspace(1.0, condition, n)) @ q.T


def pi_model_flows(branch: Branch, v_i: float, v_j: float, theta_i: float, theta_j: float) -> np.ndarray:
    """``(p_ij, q_ij, p_ji, q_ji)`` from complex branch admittances and ``S = V conj(I)``."""
    y_series = 1.0 / complex(branch.r, branch.x)
    tap = branch.tap * cmath.exp(1j * math.radians(branch.shift))
    y_tt = y_series + 0.5j * branch.b
    y_ff = y_tt / abs(tap) ** 2
    y_ft = -y_series / tap.conjugate()
    y_tf = -y_series / tap
    v_from = cmath.rect(v_i, theta_i)
    v_to = cmath.rect(v_j, theta_j)
    s_from = v_from * (y_ff * v_from + y_ft * v_to).conjugate()
    s_to = v_to * (y_tf * v_from + y_tt * v_to).conjugate()
    return np.array([s_from.real, s_from.imag, s_to.real, s_to.imag])


def fd_gradient(f, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient."""
    grad = np.zeros_like(x)
    for k in range(x.shape[0]):
        e = np.zeros_like(x)
        e[k] = h
        grad[k] = (f(x + e) - f(x - e)) / (2.0 * h)
    return grad


def fd_hessian(grad, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central finite-difference Jacobian of ``grad``."""
    n = x.shape[0]
    hess = np.zeros((n, n))
    for k in range(n):
        e = np.zeros_like(x)
        e[k] = h
        hess[:, k] = (grad(x + e) - grad(x - e)) / (2.0 * h)
    return hess


def relative_error(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.max(np.abs(actual - expected)) / max(1.0, float(np.max(np.abs(expected)))))


def acopf_oracle(case: NetworkCase) -> tuple[np.ndarray, float]:
    """Solves the full ACOPF (without line limits) with SLSQP.

    Variables are ``(v, theta, pg, qg)``; the reference angle is fixed to 0.

    Returns:
        tuple[np.ndarray, float]: the per-unit dispatch ``pg`` and the cost in $/h
    """
    index = case.bus_index()
    nb, ng = len(case.buses), len(case.generators)
    ref = case.reference_bus()
    gen_bus = [index[gen.bus] for gen in case.generators]

    def split(z):
        return z[:nb], z[nb : 2 * nb], z[2 * nb : 2 * nb + ng], z[2 * nb + ng :]

    def cost(z):
        _, _, pg, _ = split(z)
        return 1e-3 * case.total_cost(pg)

    def balance(z):
        v, theta, pg, qg = split(z)
        p = np.array([-bus.pd - bus.gs * v[i] ** 2 for i, bus in enumerate(case.buses)])
        q = np.array([-bus.qd + bus.bs * v[i] ** 2 for i, bus in enumerate(case.buses)])
        for g, i in enumerate(gen_bus):
            p[i] += pg[g]
            q[i] += qg[g]
        for br in case.branches:
            i, j = index[br.from_bus], index[br.to_bus]
            flows = pi_model_flows(br, v[i], v[j], theta[i], theta[j])
            p[i] -= flows[0]
            q[i] -= flows[1]
            p[j] -= flows[2]
            q[j] -= flows[3]
        return np.concatenate((p, q))

    bounds = (
        [(bus.vmin, bus.vmax) for bus in case.buses]
        + [(0.0, 0.0) if i == ref else (-math.pi, math.pi) for i in range(nb)]
        + [(gen.pmin, gen.pmax) for gen in case.generators]
        + [(gen.qmin, gen.qmax) for gen in case.generators]
    )
    z0 = np.concatenate(
        (
            np.clip(1.0, [b[0] for b in bounds[:nb]], [b[1] for b in bounds[:nb]]),
            np.zeros(nb),
            [(gen.pmin + gen.pmax) / 2.0 for gen in case.generators],
            [(gen.qmin + gen.qmax) / 2.0 for gen in case.generators],
        )
    )
    result = minimize(
        cost,
        z0,
        method="SLSQP",
        bounds=bounds,
        constraints=[{"type": "eq", "fun": balance}],
        options={"maxiter": 1000, "ftol": 1e-12},
    )
    assert result.success, result.message
    pg = split(result.x)[2]
    return pg, case.total_cost(pg)
