import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mfbh.errors import DomainError
from mfbh.fock import ModelParams
from mfbh.gibbs import pressure_tilde
from mfbh.varsolve import density_of_mu, objective, solve

FREE_GAS_P = 0.145413457868859057        # -ln(1 - e^-2)
FREE_GAS_RHO = 0.156517642749665652      # e^-2 / (1 - e^-2)

# regression values from this implementation, not ground truth
SMALL_COUPLING_R = 2.1202
SMALL_COUPLING_P = 1.58453


def test_free_gas():
    sol = solve(ModelParams(1.0, -1.0, 0.0))
    assert sol.r_star == 0.0
    assert sol.pressure == pytest.approx(FREE_GAS_P, abs=1e-12)
    assert sol.condensate_fraction == 0.0
    assert density_of_mu(ModelParams(1.0, -1.0, 0.0)) == pytest.approx(FREE_GAS_RHO, abs=1e-12)


def test_free_gas_unbounded_is_domain_error():
    with pytest.raises(DomainError):
        solve(ModelParams(1.0, 0.0, 0.0))


def test_displaced_oscillator_closed_form():
    # lambda = 0: a + a^* shifts by -r/(mu-1), giving F(r) = r^2 mu/(1-mu) + p~(0)
    mu, r = -1.0, 0.5
    closed = r * r * mu / (1 - mu) + FREE_GAS_P
    assert closed == pytest.approx(0.020413457868859057, abs=1e-15)
    # the public API refuses r > 0 at lambda = 0; a tiny coupling approaches the closed form
    assert objective(ModelParams(1.0, mu, 1e-9), r) == pytest.approx(closed, abs=1e-6)


def test_objective_at_zero():
    p = ModelParams(1.3, 0.4, 2.0)
    assert objective(p, 0.0) == pressure_tilde(p, 0.0)


def test_hard_core_limit():
    # large lambda freezes the site to n in {0, 1}, not to the bare vacuum
    p = ModelParams(1.0, 0.5, 1e4)
    r = 1.0
    two_level = np.log(np.exp(np.linalg.eigvalsh([[0.0, r], [r, p.mu - 1]])).sum())
    assert pressure_tilde(p, r) == pytest.approx(two_level, abs=1e-3)


def test_mott_plateau():
    sol = solve(ModelParams(200.0, 6.0, 5.0))
    assert sol.r_star == 0.0
    assert sol.density == pytest.approx(1.0, abs=1e-6)


def test_empty_limit():
    assert density_of_mu(ModelParams(1.0, -50.0, 1.0)) < 1e-20


def test_small_coupling_condenses():
    p = ModelParams(1.0, 0.5, 0.05)
    sol = solve(p)
    assert sol.r_star > 0
    assert sol.pressure > objective(p, 0.0)
    assert sol.gap_residual <= 1e-6
    assert sol.r_star == pytest.approx(SMALL_COUPLING_R, abs=1e-4)
    assert sol.pressure == pytest.approx(SMALL_COUPLING_P, abs=1e-5)


@settings(max_examples=15, deadline=None)
@given(beta=st.floats(0.2, 10), mu=st.floats(-3, 12), lam=st.floats(0.05, 6))
def test_solution_invariants(beta, mu, lam):
    p = ModelParams(beta, mu, lam)
    sol = solve(p)
    assert sol.r_star >= 0
    assert -1e-12 <= sol.condensate_fraction <= 1 + 1e-6
    assert sol.pressure >= objective(p, 0.0) - 1e-12
    if sol.r_star > 1e-6:
        assert sol.gap_residual <= 1e-6
    fixed = p.replace(cutoff=sol.cutoff)
    for r in np.linspace(0, 3 * sol.r_star + 4, 40):
        assert sol.pressure >= objective(fixed, r) - 1e-12


@pytest.mark.parametrize("beta,mu,lam", [(1.0, 0.5, 1.0), (2.0, 3.0, 5.0), (1.0, 0.5, 0.05),
                                         (0.7, -1.0, 2.0)])
def test_envelope(beta, mu, lam):
    h = 1e-4
    fd = (solve(ModelParams(beta, mu + h, lam)).pressure
          - solve(ModelParams(beta, mu - h, lam)).pressure) / (2 * h)
    assert fd == pytest.approx(density_of_mu(ModelParams(beta, mu, lam)), abs=1e-5)


@pytest.mark.parametrize("beta,mu,lam", [(1.0, 0.5, 1.0), (3.0, 2.0, 0.3), (1.0, 0.5, 0.05)])
def test_flat_at_origin(beta, mu, lam):
    p = ModelParams(beta, mu, lam, cutoff=60)
    h = 1e-3
    assert abs(objective(p, h) - objective(p, 0.0)) <= 10 * h * h


def test_pressure_monotone_in_mu():
    ps = [solve(ModelParams(1.0, mu, 2.0)).pressure for mu in np.linspace(-2, 8, 21)]
    assert np.all(np.diff(ps) >= 0)


def test_record_keys():
    rec = solve(ModelParams(1.0, 0.5, 1.0)).as_record()
    assert list(rec) == ["beta", "mu", "lambda", "r_star", "pressure", "density", "n2_mean",
                         "condensate_fraction", "degenerate_branch"]
