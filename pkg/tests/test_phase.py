import warnings

import numpy as np
import pytest

from mfbh.errors import DomainError
from mfbh.phase import (ReentranceWarning, condensate_curve, critical_beta, isotherm,
                        lambda_critical, lobe_tip, mott_gap, mu_of_density, phase_point)

FREE_GAS_RHO = 0.156517642749665652      # e^-2 / (1 - e^-2) at beta = 1, mu = -1

# regression values from this implementation
CRITICAL_BETA_L1_R1 = 0.75865
CRITICAL_BETA_L5_RHALF = 1.80002


def test_free_gas_inversion():
    assert mu_of_density(1.0, 0.0, FREE_GAS_RHO) == pytest.approx(-1.0, abs=1e-6)


def test_mott_inversion():
    mu, info = mu_of_density(200.0, 5.0, 1.0, full_output=True)
    lo, hi = mott_gap(1, 5.0)
    assert lo < mu < hi
    assert not info["discontinuous"]
    pt = phase_point(200.0, 5.0, 1.0)
    assert pt.rho == pytest.approx(1.0, abs=1e-8)
    assert pt.solution.r_star == 0.0


def test_dilute_limit_direction():
    a = mu_of_density(1.0, 1.0, 1e-6)
    b = mu_of_density(1.0, 1.0, 1e-5)
    assert a < b < -5


@pytest.mark.parametrize("rho", [0.0, -1.0])
def test_rejects_nonpositive_density(rho):
    with pytest.raises(ValueError):
        mu_of_density(1.0, 1.0, rho)


def test_unreachable_density_is_domain_error():
    with pytest.raises(DomainError):
        mu_of_density(1.0, 0.0, 1e6)


def test_density_monotone_in_mu():
    from mfbh.fock import ModelParams
    from mfbh.varsolve import solve
    rho = [solve(ModelParams(2.0, mu, 5.0)).density for mu in np.linspace(-3, 14, 35)]
    assert np.all(np.diff(rho) > 0)


def test_critical_beta_mott_has_no_transition():
    with pytest.raises(DomainError, match=r"\[1.0, 500.0\]"):
        critical_beta(5.0, 1.0, (1.0, 500.0))


def test_critical_beta_weak_coupling():
    # at lambda = 1 the unit-density state already condenses by beta = 1
    beta_c = critical_beta(1.0, 1.0, (0.1, 10.0))
    assert beta_c == pytest.approx(CRITICAL_BETA_L1_R1, abs=2e-4)
    assert not phase_point(0.9 * beta_c, 1.0, 1.0).condensed
    assert phase_point(1.1 * beta_c, 1.0, 1.0).condensed


def test_critical_beta_half_filling():
    with warnings.catch_warnings():
        warnings.simplefilter("error", ReentranceWarning)
        beta_c = critical_beta(5.0, 0.5)
    assert beta_c == pytest.approx(CRITICAL_BETA_L5_RHALF, abs=2e-4)
    assert phase_point(500.0, 5.0, 0.5).condensed


def test_critical_beta_bad_bracket():
    with pytest.raises(ValueError):
        critical_beta(1.0, 1.0, (5.0, 1.0))


@pytest.mark.slow
def test_lambda_critical_temperature_trend():
    cold, warm = lambda_critical(1, 400.0), lambda_critical(1, 100.0)
    # estimates already sit at the zero-temperature lobe tip by beta = 100
    assert abs(cold - 3) <= abs(warm - 3) + 1e-3
    assert cold == pytest.approx(lobe_tip(1), abs=5e-3)


def test_lambda_critical_validation():
    with pytest.raises(ValueError):
        lambda_critical(0)
    with pytest.raises(ValueError):
        lambda_critical(1, beta_large=50.0)


def test_lobe_and_gap_helpers():
    assert mott_gap(1, 5.0) == (1.0, 11.0)
    assert mott_gap(2, 5.0) == (11.0, 21.0)
    assert lobe_tip(1) == pytest.approx(1.5 + np.sqrt(2), abs=1e-15)


def test_isotherm_monotone_pressure_and_volume():
    rho = np.linspace(0.2, 2.6, 9)
    pts = isotherm(5.0, 2.0, rho)
    p = [pt.pressure for pt in pts]
    assert np.all(np.diff(p) >= 0)
    for pt, r in zip(pts, rho):
        assert pt.rho == pytest.approx(r, abs=1e-8)
        assert pt.specific_volume == pytest.approx(1 / pt.rho)


def test_ideal_gas_tail():
    pt = isotherm(5.0, 2.0, [1e-3])[0]
    assert abs(pt.beta * pt.pressure / pt.rho - 1) < 0.05


def test_isotherm_rejects_bad_grid():
    with pytest.raises(ValueError):
        isotherm(5.0, 2.0, [1.0, 0.5])


def test_condensate_fractions():
    pts = condensate_curve(5.0, 500.0, [0.5, 1.0])
    assert pts[0].condensate_fraction > 0.1
    assert pts[1].condensate_fraction < 1e-3
    for pt in condensate_curve(5.0, 2.0, np.linspace(0.1, 3.0, 7)):
        assert 0.0 <= pt.condensate_fraction <= 1.0 + 1e-6
        assert pt.condensed == (pt.solution.r_star > 1e-6)


def test_parallel_isotherm_matches_serial():
    rho = [0.3, 0.9, 1.7]
    a = isotherm(5.0, 2.0, rho, workers=1)
    b = isotherm(5.0, 2.0, rho, workers=2)
    assert [(x.mu, x.pressure) for x in a] == [(x.mu, x.pressure) for x in b]
