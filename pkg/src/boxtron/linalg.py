"""Dense linear algebra for small matrices.

The level-1/2 kernels mirror their BLAS namesakes but return new arrays
instead of updating in place. Matrices are square numpy arrays, allocated in
Fortran (column) order so the column loops of :func:`ccf` and :func:`trtrs`
walk contiguous memory.

Example:
    >>> L, alpha = ccf(np.array([[4.0, 2.0], [2.0, 3.0]]))
    >>> x = trtrs(L, trtrs(L, b), transpose=True)  # solves (A + alpha I) x = b

"""
from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np

from boxtron.errors import ContractViolationError, DimensionMismatchError, FactorizationError, SingularFactorError

LOGGER = logging.getLogger(__name__)

SHIFT_FLOOR = 1e-8
SHIFT_DIAG_FRACTION = 1e-3
SHIFT_CAP_FACTOR = 1e8


def _vector(x, operation: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatchError(operation, x.shape)
    return x


def _matrix(A, operation: str) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatchError(operation, A.shape)
    return A


def _same_length(operation: str, x: np.ndarray, y: np.ndarray):
    if x.shape != y.shape:
        raise DimensionMismatchError(operation, x.shape, y.shape)


def axpy(alpha: float, x, y) -> np.ndarray:
    """Returns ``y + alpha * x``."""
    x, y = _vector(x, "axpy"), _vector(y, "axpy")
    _same_length("axpy", x, y)
    return y + alpha * x


def dot(x, y) -> float:
    """Returns the inner product of ``x`` and ``y``."""
    x, y = _vector(x, "dot"), _vector(y, "dot")
    _same_length("dot", x, y)
    return float(np.dot(x, y))


def nrm2(x) -> float:
    """Returns the Euclidean norm of ``x``."""
    return float(np.linalg.norm(_vector(x, "nrm2")))


def scal(alpha: float, x) -> np.ndarray:
    """Returns ``alpha * x``."""
    return alpha * _vector(x, "scal")


def copy(x) -> np.ndarray:
    """Returns a copy of ``x``."""
    return _vector(x, "copy").copy()


def gemv(alpha: float, A, x, beta: float = 0.0, y=None, transpose: bool = False) -> np.ndarray:
    """Returns ``alpha * A @ x + beta * y`` (``A.T`` when ``transpose`` is set).

    ``y`` is not read when ``beta`` is zero and may be omitted, and ``A`` is not
    multiplied when ``alpha`` is zero.

    Args:
        alpha (float): scalar applied to the matrix product
        A (array-like): n x n matrix
        x (array-like): vector of length n
        beta (float): scalar applied to ``y``
        y (array-like | None): vector of length n
        transpose (bool): multiply with the transpose of ``A``

    Returns:
        np.ndarray: the resulting vector

    Raises:
        DimensionMismatchError: if the operands do not conform
    """
    A = _matrix(A, "gemv")
    x = _vector(x, "gemv")
    if x.shape[0] != A.shape[1]:
        raise DimensionMismatchError("gemv", A.shape, x.shape)
    if beta != 0.0:
        if y is None:
            raise ContractViolationError("gemv: beta is nonzero but y is missing")
        y = _vector(y, "gemv")
        if y.shape[0] != A.shape[0]:
            raise DimensionMismatchError("gemv", A.shape, y.shape)
        result = beta * y
    else:
        result = np.zeros(A.shape[0])
    if alpha != 0.0:
        result = result + alpha * ((A.T if transpose else A) @ x)
    return result


def ccfs(A, alpha: float) -> np.ndarray:
    """Returns the diagonal-shifted copy ``A + alpha * I``."""
    if alpha < 0:
        raise ContractViolationError(f"ccfs: shift must be nonnegative, got {alpha}")
    A = _matrix(A, "ccfs")
    shifted = np.array(A, order="F")
    shifted[np.diag_indices_from(shifted)] += alpha
    return shifted


def _left_looking(A: np.ndarray, alpha: float) -> np.ndarray | None:
    n = A.shape[0]
    L = np.zeros((n, n), order="F")
    for j in range(n):
        # column j of A + alpha I minus the contribution of columns 0..j-1
        column = A[j:, j] - L[j:, :j] @ L[j, :j]
        column[0] += alpha
        if not column[0] > 0.0:
            return None
        pivot = math.sqrt(column[0])
        L[j, j] = pivot
        L[j + 1 :, j] = column[1:] / pivot
    return L


def _right_looking(A: np.ndarray, alpha: float) -> np.ndarray | None:
    n = A.shape[0]
    W = np.array(np.tril(A), order="F")
    W[np.diag_indices(n)] += alpha
    for k in range(n):
        if not W[k, k] > 0.0:
            return None
        W[k, k] = math.sqrt(W[k, k])
        W[k + 1 :, k] /= W[k, k]
        # rank-one update of the trailing lower triangle
        for j in range(k + 1, n):
            W[j:, j] -= W[j:, k] * W[j, k]
    return W


def _shifted_factorization(
    A, factor: Callable[[np.ndarray, float], "np.ndarray | None"], operation: str
) -> tuple[np.ndarray, float]:
    A = _matrix(A, operation)
    lower = np.tril(A)
    if not np.all(np.isfinite(lower)):
        raise ContractViolationError(f"{operation}: matrix has non-finite entries")
    amax = float(np.max(np.abs(lower)))
    alpha0 = max(SHIFT_DIAG_FRACTION * float(np.max(np.abs(np.diag(A)))), SHIFT_FLOOR)
    cap = SHIFT_CAP_FACTOR * max(1.0, amax)

    alpha = 0.0
    while True:
        L = factor(A, alpha)
        if L is not None:
            if alpha > 0.0:
                LOGGER.debug("%s: factorization needed shift %.3e", operation, alpha)
            return L, alpha
        alpha = max(2.0 * alpha, alpha0)
        if alpha > cap:
            raise FactorizationError(alpha, cap)


def ccf(A) -> tuple[np.ndarray, float]:
    """Complete Cholesky factorization with a diagonal shift, left-looking.

    Only the lower triangle of ``A`` is read. The factorization is first
    attempted without a shift; on a nonpositive pivot it restarts with
    ``alpha = max(2 * alpha, alpha0)`` where
    ``alpha0 = max(1e-3 * max|A_ii|, 1e-8)``.

    Args:
        A (array-like): symmetric n x n matrix

    Returns:
        tuple[np.ndarray, float]: lower triangular ``L`` with positive diagonal and the
            shift ``alpha`` such that ``A + alpha I = L L^T``

    Raises:
        FactorizationError: if the shift exceeds ``1e8 * max(1, max|A_ij|)``
        ContractViolationError: if ``A`` is not a finite square matrix
    """
    return _shifted_factorization(A, _left_looking, "ccf")


def ccf_right_looking(A) -> tuple[np.ndarray, float]:
    """Same contract as :func:`ccf`, computed with trailing-submatrix updates."""
    return _shifted_factorization(A, _right_looking, "ccf_right_looking")


def trtrs(L, b, transpose: bool = False) -> np.ndarray:
    """Solves ``L x = b`` by forward substitution, or ``L^T x = b`` by backward substitution.

    Args:
        L (array-like): lower triangular matrix, the strict upper triangle is ignored
        b (array-like): right hand side
        transpose (bool): solve with ``L^T``

    Returns:
        np.ndarray: the solution ``x``

    Raises:
        SingularFactorError: if a diagonal entry of ``L`` is zero
        DimensionMismatchError: if ``b`` does not conform
    """
    L = _matrix(L, "trtrs")
    x = _vector(b, "trtrs").copy()
    n = L.shape[0]
    if x.shape[0] != n:
        raise DimensionMismatchError("trtrs", L.shape, x.shape)
    zero = np.flatnonzero(np.diag(L) == 0.0)
    if zero.size:
        raise SingularFactorError(int(zero[0]))

    if not transpose:
        for j in range(n):
            x[j] /= L[j, j]
            x[j + 1 :] -= x[j] * L[j + 1 :, j]
    else:
        for j in range(n - 1, -1, -1):
            x[j] = (x[j] - L[j + 1 :, j] @ x[j + 1 :]) / L[j, j]
    return x
