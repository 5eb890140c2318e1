"""Concrete bound-constrained problems."""
from __future__ import annotations

import numpy as np

from boxtron.errors import DimensionMismatchError
from boxtron.tron import BoundedProblem


class Hs45Problem(BoundedProblem):
    """The hs45 family ``f(x) = 120 - prod(x)`` on ``0 <= x_i <= i``.

    The minimizer is the upper corner ``x_i = i`` with ``f = 120 - n!``.
    """

    def __init__(self, n: int, capacity: int | None = None):
        super().__init__(np.zeros(n), np.arange(1, n + 1, dtype=float), capacity)

    def default_start(self) -> np.ndarray:
        """Midpoint of the box."""
        return self.upper / 2.0

    def eval_f(self, x: np.ndarray) -> float:  # noqa: D102
        return 120.0 - float(np.prod(x))

    def eval_grad(self, x: np.ndarray) -> np.ndarray:  # noqa: D102
        others = np.tile(np.asarray(x, dtype=float), (self.dim, 1))
        np.fill_diagonal(others, 1.0)
        return -np.prod(others, axis=1)

    def eval_hess(self, x: np.ndarray) -> np.ndarray:  # noqa: D102
        n = self.dim
        idx = np.arange(n)
        others = np.tile(np.asarray(x, dtype=float), (n, n, 1))
        others[idx, :, idx] = 1.0
        others[:, idx, idx] = 1.0
        hess = -np.prod(others, axis=2)
        np.fill_diagonal(hess, 0.0)
        return np.asfortranarray(hess)


class BoxQuadratic(BoundedProblem):
    """``f(x) = (x - c)' H (x - c) / 2 + const`` over a box."""

    def __init__(self, H, c, lower, upper, const: float = 0.0, capacity: int | None = None):
        super().__init__(lower, upper, capacity)
        self.H = np.asfortranarray(H, dtype=float)
        self.c = np.asarray(c, dtype=float)
        if self.H.shape != (self.dim, self.dim) or self.c.shape != (self.dim,):
            raise DimensionMismatchError("BoxQuadratic", self.H.shape, self.c.shape, self.lower.shape)
        self.const = float(const)

    def eval_f(self, x: np.ndarray) -> float:  # noqa: D102
        d = np.asarray(x, dtype=float) - self.c
        return 0.5 * float(d @ self.H @ d) + self.const

    def eval_grad(self, x: np.ndarray) -> np.ndarray:  # noqa: D102
        return self.H @ (np.asarray(x, dtype=float) - self.c)

    def eval_hess(self, x: np.ndarray) -> np.ndarray:  # noqa: D102
        return self.H
