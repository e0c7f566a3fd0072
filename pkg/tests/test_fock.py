import numpy as np
import pytest

from mfbh.errors import DomainError
from mfbh.fock import ModelParams, build_K, build_fock_operators, check_finite_trace


def test_quad_and_number_cutoff_2():
    ops = build_fock_operators(2)
    s2 = np.sqrt(2.0)
    np.testing.assert_array_equal(ops.quad, [[0, 1, 0], [1, 0, s2], [0, s2, 0]])
    np.testing.assert_array_equal(ops.number, np.diag([0.0, 1.0, 2.0]))
    assert ops.dim == 3


def test_number_sq_cutoff_1():
    np.testing.assert_array_equal(build_fock_operators(1).number_sq, np.diag([0.0, 1.0]))


def test_truncated_commutator_is_identity_on_interior():
    ops = build_fock_operators(5)
    a = ops.annihilation
    comm = a @ a.T - a.T @ a
    np.testing.assert_allclose(comm[:5, :5], np.eye(5), atol=1e-14)
    # the top state is where truncation shows
    assert comm[5, 5] == pytest.approx(-5.0)


@pytest.mark.parametrize("cutoff", [1, 4, 17])
def test_operator_invariants(cutoff):
    ops = build_fock_operators(cutoff)
    assert np.array_equal(ops.quad, ops.quad.T)
    assert np.all(np.diag(ops.quad) == 0)
    for n in range(cutoff):
        assert ops.quad[n, n + 1] == np.sqrt(n + 1)
    np.testing.assert_array_equal(ops.number @ ops.number, ops.number_sq)
    np.testing.assert_allclose(ops.annihilation.T @ ops.annihilation, ops.number, atol=1e-14)


@pytest.mark.parametrize("bad", [0, -3, 2.5, True])
def test_rejects_bad_cutoff(bad):
    with pytest.raises(ValueError):
        build_fock_operators(bad)


def test_operators_are_read_only():
    ops = build_fock_operators(3)
    with pytest.raises(ValueError):
        ops.quad[0, 1] = 5.0


def test_K_free_gas_is_diagonal_mu_minus_one():
    ops = build_fock_operators(4)
    K = build_K(ModelParams(1.0, 0.0, 0.0), ops, 0.0)
    np.testing.assert_array_equal(K, np.diag([0.0, -1, -2, -3, -4]))


def test_K_diagonal_lambda_one_mu_zero():
    # (mu + lam - 1) k - lam k^2 = -k^2
    K = build_K(ModelParams(1.0, 0.0, 1.0), build_fock_operators(3), 0.0)
    np.testing.assert_array_equal(np.diag(K), [0.0, -1.0, -4.0, -9.0])


def test_K_diagonal_lambda_one_mu_one_is_k_minus_k_squared():
    K = build_K(ModelParams(1.0, 1.0, 1.0), build_fock_operators(3), 0.0)
    np.testing.assert_array_equal(np.diag(K), [0.0, 0.0, -2.0, -6.0])


def test_K_off_diagonal_scaling():
    K = build_K(ModelParams(1.0, 0.0, 1.0), build_fock_operators(2), 0.5)
    np.testing.assert_allclose(np.diag(K, 1), [0.5, 0.5 * np.sqrt(2)], rtol=0, atol=1e-15)
    np.testing.assert_array_equal(np.diag(K), [0.0, -1.0, -4.0])


def test_K_affine_in_r_and_symmetric():
    p = ModelParams(1.0, 0.3, 2.0)
    ops = build_fock_operators(10)
    K1, K2 = build_K(p, ops, 0.4), build_K(p, ops, 1.9)
    np.testing.assert_allclose(K2 - K1, 1.5 * ops.quad, atol=1e-15)
    assert np.array_equal(K1, K1.T)
    assert np.count_nonzero(build_K(p, ops, 0.0) - np.diag(np.diag(build_K(p, ops, 0.0)))) == 0


@pytest.mark.parametrize("kw", [dict(beta=0), dict(beta=-1), dict(lam=-0.1), dict(cutoff=0),
                                dict(cutoff="big"), dict(mu=float("nan"))])
def test_model_params_validation(kw):
    base = dict(beta=1.0, mu=0.0, lam=1.0)
    base.update(kw)
    with pytest.raises(ValueError):
        ModelParams(**base)


def test_free_gas_domain():
    check_finite_trace(ModelParams(1.0, 0.5, 0.0), 0.0)
    with pytest.raises(DomainError):
        check_finite_trace(ModelParams(1.0, 1.0, 0.0), 0.0)
    with pytest.raises(DomainError):
        check_finite_trace(ModelParams(1.0, -1.0, 0.0), 0.1)
    check_finite_trace(ModelParams(1.0, 5.0, 0.1), 3.0)
