import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from boxtron.errors import ContractViolationError, DimensionMismatchError, SingularFactorError
from boxtron.linalg import axpy, ccf, ccf_right_looking, ccfs, copy, dot, gemv, nrm2, scal, trtrs

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def symmetric(n: int, values: np.ndarray) -> np.ndarray:
    upper = np.triu(values[:n, :n])
    return upper + np.triu(upper, 1).T


@pytest.mark.parametrize(
    ("alpha", "x", "y", "expected"),
    [
        (0.0, (1, 2), (3, 4), (3, 4)),
        (1.0, (1, 1), (0, 0), (1, 1)),
        (2.0, (1, -1), (1, 1), (3, -1)),
    ],
)
def test_axpy(alpha, x, y, expected):
    np.testing.assert_array_equal(axpy(alpha, x, y), expected)


def test_level1():
    assert dot((1, 0), (0, 1)) == 0
    assert dot((1, 0), (5, 7)) == 5
    assert dot((1, 2, 3), (4, 5, 6)) == 32
    assert nrm2((3, 4)) == 5
    np.testing.assert_array_equal(scal(0, (1, 2)), (0, 0))
    original = np.array([1.0, 2.0])
    duplicate = copy(original)
    np.testing.assert_array_equal(duplicate, (1, 2))
    assert duplicate is not original


def test_level1_dimension_mismatch():
    with pytest.raises(DimensionMismatchError) as exc_info:
        dot((1, 2), (1, 2, 3))
    assert exc_info.value.operation == "dot"
    with pytest.raises(ContractViolationError):
        axpy(1.0, (1,), (1, 2))


def test_gemv():
    np.testing.assert_array_equal(gemv(1.0, np.eye(2), (2, 3)), (2, 3))
    np.testing.assert_array_equal(gemv(1.0, [[1, 2], [3, 4]], (1, 1)), (3, 7))
    np.testing.assert_array_equal(gemv(1.0, [[1, 2], [3, 4]], (1, 1), transpose=True), (4, 6))
    np.testing.assert_array_equal(gemv(0.0, [[np.nan, 1], [1, 1]], (1, 1), beta=1.0, y=(9, 9)), (9, 9))
    # y is not read when beta is zero
    np.testing.assert_array_equal(gemv(1.0, np.eye(2), (1, 1), beta=0.0, y=(np.nan, np.nan)), (1, 1))
    with pytest.raises(ContractViolationError):
        gemv(1.0, np.eye(2), (1, 1), beta=1.0)
    with pytest.raises(DimensionMismatchError):
        gemv(1.0, np.eye(2), (1, 1, 1))


@settings(max_examples=50, deadline=None)
@given(
    a=arrays(float, (5, 5), elements=finite),
    x=arrays(float, 5, elements=finite),
    y=arrays(float, 5, elements=finite),
    alpha=finite,
)
def test_gemv_linearity(a, x, y, alpha):
    np.testing.assert_allclose(gemv(alpha, a, x + y), gemv(alpha, a, x) + gemv(alpha, a, y), atol=1e-9)


def test_ccfs():
    np.testing.assert_array_equal(ccfs(np.zeros((2, 2)), 1.0), np.eye(2))
    np.testing.assert_array_equal(ccfs(np.eye(2), 0.0), np.eye(2))
    A = np.array([[1.0, 2.0], [2.0, 1.0]])
    np.testing.assert_array_equal(ccfs(A, 3.0), [[4, 2], [2, 4]])
    assert A[0, 0] == 1.0
    with pytest.raises(ContractViolationError):
        ccfs(A, -1.0)


@pytest.mark.parametrize("factorize", [ccf, ccf_right_looking])
def test_ccf_examples(factorize):
    L, alpha = factorize(np.eye(3))
    np.testing.assert_array_equal(L, np.eye(3))
    assert alpha == 0.0

    L, alpha = factorize(np.array([[4.0, 2.0], [2.0, 3.0]]))
    np.testing.assert_allclose(L, [[2.0, 0.0], [1.0, math.sqrt(2.0)]], atol=1e-15)
    assert alpha == 0.0

    A = np.array([[0.0, 0.0], [0.0, -1.0]])
    L, alpha = factorize(A)
    assert alpha > 0.0
    np.testing.assert_allclose(L @ L.T, A + alpha * np.eye(2), atol=1e-12)
    assert np.all(np.diag(L) > 0)
    assert np.all(np.triu(L, 1) == 0)


def test_ccf_reads_lower_triangle_only():
    A = np.array([[4.0, 100.0], [2.0, 3.0]])
    L, alpha = ccf(A)
    assert alpha == 0.0
    np.testing.assert_allclose(L @ L.T, [[4.0, 2.0], [2.0, 3.0]])


def test_ccf_rejects_non_finite():
    with pytest.raises(ContractViolationError):
        ccf(np.array([[np.inf, 0.0], [0.0, 1.0]]))


def test_ccf_recomposition_random(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 33))
        A = symmetric(n, rng.standard_normal((n, n)) * 10.0 ** rng.uniform(-2, 2))
        if rng.random() < 0.5:
            A = A @ A.T + np.eye(n)
        L, alpha = ccf(A)
        amax = np.max(np.abs(A))
        assert np.max(np.abs(A + alpha * np.eye(n) - L @ L.T)) <= 1e-10 * (1.0 + amax)


def test_ccf_orderings_agree_on_spd(rng):
    for _ in range(200):
        n = int(rng.integers(1, 33))
        B = rng.standard_normal((n, n))
        A = B @ B.T + n * np.eye(n)
        L_left, alpha_left = ccf(A)
        L_right, alpha_right = ccf_right_looking(A)
        assert alpha_left == alpha_right == 0.0
        np.testing.assert_allclose(L_left, L_right, rtol=0.0, atol=1e-12)


def test_trtrs():
    np.testing.assert_array_equal(trtrs(np.eye(2), (1, 2)), (1, 2))
    L = np.array([[2.0, 0.0], [1.0, 1.0]])
    np.testing.assert_allclose(trtrs(L, (2, 2)), (1, 1))
    np.testing.assert_allclose(trtrs(L, (3, 1), transpose=True), (1, 1))
    with pytest.raises(SingularFactorError) as exc_info:
        trtrs(np.array([[1.0, 0.0], [1.0, 0.0]]), (1, 1))
    assert exc_info.value.index == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=1, max_value=32), st.integers(min_value=0, max_value=2**32 - 1))
def test_trtrs_inverts_triangular_products(n, seed):
    generator = np.random.default_rng(seed)
    L = np.tril(generator.uniform(-1.0, 1.0, (n, n)) / n, k=-1) + np.diag(generator.uniform(0.5, 2.0, n))
    x = generator.standard_normal(n)
    np.testing.assert_allclose(trtrs(L, L @ x), x, rtol=0.0, atol=1e-12)
    np.testing.assert_allclose(trtrs(L, L.T @ x, transpose=True), x, rtol=0.0, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**32 - 1))
def test_factor_solve_round_trip(n, seed):
    generator = np.random.default_rng(seed)
    B = generator.standard_normal((n, n))
    A = B @ B.T + np.eye(n)
    b = generator.standard_normal(n)
    L, alpha = ccf(A)
    x = trtrs(L, trtrs(L, b), transpose=True)
    np.testing.assert_allclose((A + alpha * np.eye(n)) @ x, b, atol=1e-8 * max(1.0, np.max(np.abs(A))))
