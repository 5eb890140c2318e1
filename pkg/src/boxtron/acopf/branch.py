"""Branch flows and the branch subproblem of the ADMM decomposition.

With ``w_i = v_i^2``, ``wR = v_i v_j cos(t_i - t_j)`` and
``wI = v_i v_j sin(t_i - t_j)`` the line flows of a pi-model branch are linear:

    p_ij = gc_ij w_i - g_ij wR + b_ij wI
    q_ij = bc_ij w_i - b_ij wR - g_ij wI
    p_ji = gc_ji w_j - g_ji wR - b_ji wI
    q_ji = bc_ji w_j - b_ji wR + g_ji wI

The branch subproblem penalizes the distance of these flows and of
``(v_i^2, v_j^2, t_i, t_j)`` from their consensus values with an augmented
Lagrangian, over the voltage-magnitude and angle box.
"""
from __future__ import annotations

import cmath
import dataclasses
import math

import numpy as np

from boxtron.acopf.case import Branch
from boxtron.errors import ContractViolationError, ZeroImpedanceError
from boxtron.tron import BoundedProblem

ANGLE_BOUND = 2.0 * math.pi

#: order of the coupled quantities of a branch
QUANTITIES = ("p_ij", "q_ij", "p_ji", "q_ji", "w_i", "w_j", "theta_i", "theta_j")


@dataclasses.dataclass(frozen=True)
class BranchParams:
    """Per-unit admittance coefficients of the four line-flow equations."""

    g_ij: float
    b_ij: float
    g_ji: float
    b_ji: float
    g_c_ij: float
    b_c_ij: float
    g_c_ji: float
    b_c_ji: float

    def flow_matrix(self) -> np.ndarray:
        """4 x 4 map from ``(w_i, w_j, wR, wI)`` to ``(p_ij, q_ij, p_ji, q_ji)``."""
        return np.array(
            [
                [self.g_c_ij, 0.0, -self.g_ij, self.b_ij],
                [self.b_c_ij, 0.0, -self.b_ij, -self.g_ij],
                [0.0, self.g_c_ji, -self.g_ji, -self.b_ji],
                [0.0, self.b_c_ji, -self.b_ji, self.g_ji],
            ]
        )


def branch_params(branch: Branch) -> BranchParams:
    """Coefficients of the standard pi model with tap ratio and phase shift.

    ``r``, ``x`` and ``b`` are taken as per-unit values, as MATPOWER stores them.

    Raises:
        ZeroImpedanceError: if ``r = x = 0``
    """
    if branch.r == 0.0 and branch.x == 0.0:
        raise ZeroImpedanceError(branch.from_bus, branch.to_bus)
    y_series = 1.0 / complex(branch.r, branch.x)
    tap = branch.tap * cmath.exp(1j * math.radians(branch.shift))
    y_tt = y_series + 0.5j * branch.b
    y_ff = y_tt / (tap * tap.conjugate())
    y_ft = -y_series / tap.conjugate()
    y_tf = -y_series / tap
    return BranchParams(
        g_ij=-y_ft.real,
        b_ij=y_ft.imag,
        g_ji=-y_tf.real,
        b_ji=y_tf.imag,
        g_c_ij=y_ff.real,
        b_c_ij=-y_ff.imag,
        g_c_ji=y_tt.real,
        b_c_ji=-y_tt.imag,
    )


def _basis(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Values, Jacobian and Hessians of ``(w_i, w_j, wR, wI)`` at ``(v_i, v_j, t_i, t_j)``."""
    vi, vj, ti, tj = x
    c, s = math.cos(ti - tj), math.sin(ti - tj)
    vv = vi * vj
    y = np.array([vi * vi, vj * vj, vv * c, vv * s])
    jac = np.array(
        [
            [2.0 * vi, 0.0, 0.0, 0.0],
            [0.0, 2.0 * vj, 0.0, 0.0],
            [vj * c, vi * c, -vv * s, vv * s],
            [vj * s, vi * s, vv * c, -vv * c],
        ]
    )
    hess = np.zeros((4, 4, 4))
    hess[0, 0, 0] = 2.0
    hess[1, 1, 1] = 2.0
    hess[2] = [
        [0.0, c, -vj * s, vj * s],
        [c, 0.0, -vi * s, vi * s],
        [-vj * s, -vi * s, -vv * c, vv * c],
        [vj * s, vi * s, vv * c, -vv * c],
    ]
    hess[3] = [
        [0.0, s, vj * c, -vj * c],
        [s, 0.0, vi * c, -vi * c],
        [vj * c, vi * c, -vv * s, vv * s],
        [-vj * c, -vi * c, vv * s, -vv * s],
    ]
    return y, jac, hess


def line_flows(params: BranchParams, v_i: float, v_j: float, theta_i: float, theta_j: float) -> np.ndarray:
    """``(p_ij, q_ij, p_ji, q_ji)`` for the given endpoint voltages."""
    y, _, _ = _basis(np.array([v_i, v_j, theta_i, theta_j], dtype=float))
    return params.flow_matrix() @ y


class BranchSubproblem(BoundedProblem):
    """Augmented Lagrangian of one branch over ``x = (v_i, v_j, t_i, t_j)``.

    For every coupled quantity ``k`` in :data:`QUANTITIES` with residual
    ``r_k(x) = quantity_k(x) - tilde_k`` the objective adds
    ``lam_k r_k + rho_k r_k^2 / 2``.
    """

    def __init__(
        self,
        params: BranchParams,
        v_bounds_i: tuple[float, float],
        v_bounds_j: tuple[float, float],
        lam,
        rho,
        tilde,
    ):
        super().__init__(
            [v_bounds_i[0], v_bounds_j[0], -ANGLE_BOUND, -ANGLE_BOUND],
            [v_bounds_i[1], v_bounds_j[1], ANGLE_BOUND, ANGLE_BOUND],
        )
        self.params = params
        self.lam = np.asarray(lam, dtype=float)
        self.rho = np.asarray(rho, dtype=float)
        self.tilde = np.asarray(tilde, dtype=float)
        for name, values in (("lam", self.lam), ("rho", self.rho), ("tilde", self.tilde)):
            if values.shape != (len(QUANTITIES),):
                raise ContractViolationError(f"{name} must have {len(QUANTITIES)} entries, got {values.shape}")
        if np.any(self.rho <= 0):
            raise ContractViolationError("penalties must be positive")
        coupling = np.zeros((6, 4))
        coupling[:4] = params.flow_matrix()
        coupling[4, 0] = coupling[5, 1] = 1.0
        self._coupling = coupling

    def quantities(self, x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coupled quantities with their Jacobian (8 x 4) and Hessians (8 x 4 x 4)."""
        x = np.asarray(x, dtype=float)
        y, jac, hess = _basis(x)
        values = np.concatenate((self._coupling @ y, x[2:]))
        jacobian = np.vstack((self._coupling @ jac, [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]))
        hessians = np.concatenate((np.einsum("km,mab->kab", self._coupling, hess), np.zeros((2, 4, 4))))
        return values, jacobian, hessians

    def eval_f(self, x: np.ndarray) -> float:  # noqa: D102
        values, _, _ = self.quantities(x)
        r = values - self.tilde
        return float(self.lam @ r + 0.5 * (self.rho * r) @ r)

    def eval_grad(self, x: np.ndarray) -> np.ndarray:  # noqa: D102
        values, jacobian, _ = self.quantities(x)
        return jacobian.T @ (self.lam + self.rho * (values - self.tilde))

    def eval_hess(self, x: np.ndarray) -> np.ndarray:  # noqa: D102
        values, jacobian, hessians = self.quantities(x)
        weights = self.lam + self.rho * (values - self.tilde)
        hess = jacobian.T @ (self.rho[:, np.newaxis] * jacobian) + np.einsum("k,kab->ab", weights, hessians)
        return np.asfortranarray(0.5 * (hess + hess.T))


def branch_eval(sub: BranchSubproblem, x) -> tuple[float, np.ndarray, np.ndarray]:
    """Objective, gradient and Hessian of a branch subproblem at ``x``."""
    return sub.eval_f(x), sub.eval_grad(x), sub.eval_hess(x)
