import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mfbh.errors import NumericalFailure
from mfbh.fock import build_fock_operators
from mfbh.spectrum import (eig_symmetric, householder_tridiagonalize, log_sum_exp,
                           tridiagonal_ql)

METHODS = ["lapack", "ql"]


def check_decomposition(A, dec):
    w, V = dec.eigenvalues, dec.eigenvectors
    fro = max(np.linalg.norm(A), 1e-300)
    assert np.all(np.diff(w) >= 0)
    assert np.abs(A @ V - V * w).max() <= 1e-10 * fro
    assert np.abs(V.T @ V - np.eye(len(w))).max() <= 1e-10
    assert np.abs(dec.reconstruct() - A).max() <= 1e-9 * fro
    assert abs(w.sum() - np.trace(A)) <= 1e-9 * fro


@pytest.mark.parametrize("method", METHODS)
def test_diagonal(method):
    dec = eig_symmetric(np.diag([3.0, 1.0, 2.0]), method)
    np.testing.assert_allclose(dec.eigenvalues, [1, 2, 3], atol=1e-15)


@pytest.mark.parametrize("method", METHODS)
def test_two_by_two(method):
    np.testing.assert_allclose(eig_symmetric([[0.0, 1.0], [1.0, 0.0]], method).eigenvalues,
                               [-1, 1], atol=1e-15)


@pytest.mark.parametrize("method", METHODS)
def test_quad_cutoff_2(method):
    # characteristic polynomial x^3 - 3x
    dec = eig_symmetric(build_fock_operators(2).quad, method)
    np.testing.assert_allclose(dec.eigenvalues, [-np.sqrt(3), 0, np.sqrt(3)], atol=1e-14)


@pytest.mark.parametrize("method", METHODS)
def test_one_by_one(method):
    dec = eig_symmetric([[4.5]], method)
    assert dec.eigenvalues.tolist() == [4.5]


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 50), seed=st.integers(0, 2**32 - 1), method=st.sampled_from(METHODS))
def test_random_symmetric(n, seed, method):
    rng = np.random.default_rng(seed)
    B = rng.normal(size=(n, n))
    A = B + B.T
    check_decomposition(A, eig_symmetric(A, method))


def test_routes_agree_on_repeated_eigenvalues(rng):
    Q, _ = np.linalg.qr(rng.normal(size=(8, 8)))
    A = Q @ np.diag([1, 1, 1, 2, 2, 5, -3, -3.0]) @ Q.T
    A = 0.5 * (A + A.T)
    a, b = eig_symmetric(A, "lapack"), eig_symmetric(A, "ql")
    np.testing.assert_allclose(a.eigenvalues, b.eigenvalues, atol=1e-12)
    check_decomposition(A, b)


def test_householder_produces_similar_tridiagonal(rng):
    B = rng.normal(size=(7, 7))
    A = B + B.T
    d, e, Q = householder_tridiagonalize(A)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(Q @ T @ Q.T, A, atol=1e-12)


def test_ql_sweep_budget_is_enforced():
    d = np.array([1.0, 2.0, 3.0, 4.0])
    e = np.array([1.0, 1.0, 1.0])
    with pytest.raises(NumericalFailure, match="4x4"):
        tridiagonal_ql(d, e, max_sweeps=0)


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        eig_symmetric([[0.0, 1.0], [0.0, 0.0]])


def test_log_sum_exp_examples():
    assert log_sum_exp([5.0], 2.0) == 10.0
    assert log_sum_exp([0.0, 0.0], 1.0) == pytest.approx(np.log(2), abs=1e-15)
    assert log_sum_exp([1000.0, 999.0], 1.0) == pytest.approx(1000.313261687518, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30), st.floats(0.01, 100))
def test_log_sum_exp_finite_and_bounded(values, scale):
    out = log_sum_exp(values, scale)
    m = scale * max(values)
    assert np.isfinite(out)
    assert m - 1e-9 * max(1, abs(m)) <= out <= m + np.log(len(values)) + 1e-9 * max(1, abs(m))


def test_log_sum_exp_rejects_empty():
    with pytest.raises(ValueError):
        log_sum_exp([])
