"""Phase-diagram quantities at fixed density.

"Fixed density" is grand canonical throughout: the chemical potential is
found by inverting the monotone map ``mu -> rho(mu)`` at fixed ``beta`` and
``lambda``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import partial

import numpy as np

from ._parallel import parallel_map
from .errors import DomainError
from .fock import AUTO, ModelParams
from .varsolve import VariationalSolution, solve

CONDENSED_R = 1e-6
MU_RANGE = (-100.0, 100.0)
RHO_TOL = 1e-8
MU_TOL = 1e-12
BETA_TOL = 1e-4
FRACTION_THRESHOLD = 1e-3
LAMBDA_STEP = 0.05
LAMBDA_TOL = 1e-3


class ReentranceWarning(UserWarning):
    """The condensed indicator changes more than once along a scan."""


@dataclass(frozen=True)
class PhasePoint:
    beta: float
    mu: float
    lam: float
    rho: float
    solution: VariationalSolution
    discontinuous: bool = False

    @property
    def condensed(self) -> bool:
        return self.solution.r_star > CONDENSED_R

    @property
    def pressure(self) -> float:
        return self.solution.pressure

    @property
    def specific_volume(self) -> float:
        return 1.0 / self.rho

    @property
    def condensate_fraction(self) -> float:
        return self.solution.condensate_fraction


def _density(beta, lam, mu, cutoff):
    return solve(ModelParams(beta, mu, lam, cutoff)).density


def mu_of_density(beta: float, lam: float, rho_target: float, cutoff=AUTO, *,
                  rho_tol: float = RHO_TOL, mu_tol: float = MU_TOL, full_output: bool = False):
    """Chemical potential at which the equilibrium density equals ``rho_target``.

    Bisection on ``mu``.  Stops once ``|rho(mu) - rho_target| < rho_tol`` or
    the bracket is narrower than ``mu_tol``.  If the bracket collapses with the
    density still off target, ``rho(mu)`` jumps there (first-order line) and
    the jump location is returned with ``discontinuous=True``.

    Returns
    -------
    mu : float
        or ``(mu, info)`` with ``info = {"rho": ..., "discontinuous": ...}``
        when ``full_output`` is set.
    """
    if not rho_target > 0:
        raise ValueError(f"rho_target must be positive, got {rho_target}")
    lo_lim, hi_lim = MU_RANGE
    if lam == 0:
        # beyond mu = 0 the free gas condenses without bound
        hi_lim = -1e-12
    dens = partial(_density, beta, lam, cutoff=cutoff)

    lo, hi = max(-1.0, lo_lim), min(1.0, hi_lim)
    rho_lo, rho_hi = dens(mu=lo), dens(mu=hi)
    while rho_lo > rho_target:
        if lo == lo_lim:
            raise DomainError(f"density {rho_target} is below rho(mu={lo_lim}) = {rho_lo}")
        hi, rho_hi = lo, rho_lo
        lo = max(2.0 * lo - 1.0 if lo < 0 else -2.0, lo_lim)
        rho_lo = dens(mu=lo)
    while rho_hi < rho_target:
        if hi == hi_lim:
            raise DomainError(f"density {rho_target} exceeds rho(mu={hi_lim}) = {rho_hi}")
        lo, rho_lo = hi, rho_hi
        hi = min(2.0 * hi + 1.0 if hi > 0 else 2.0, hi_lim)
        rho_hi = dens(mu=hi)

    mu, rho = lo, rho_lo
    if abs(rho_hi - rho_target) < abs(rho_lo - rho_target):
        mu, rho = hi, rho_hi
    while abs(rho - rho_target) >= rho_tol and hi - lo >= mu_tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        rho_mid = dens(mu=mid)
        if rho_mid < rho_target:
            lo, rho_lo = mid, rho_mid
        else:
            hi, rho_hi = mid, rho_mid
        mu, rho = mid, rho_mid
    discontinuous = abs(rho - rho_target) >= rho_tol
    if discontinuous:
        mu = 0.5 * (lo + hi)
    if full_output:
        return mu, {"rho": rho, "discontinuous": discontinuous}
    return mu


def phase_point(beta: float, lam: float, rho: float, cutoff=AUTO) -> PhasePoint:
    """Solve at the chemical potential that realises density ``rho``."""
    mu, info = mu_of_density(beta, lam, rho, cutoff, full_output=True)
    sol = solve(ModelParams(beta, mu, lam, cutoff))
    return PhasePoint(beta, mu, lam, sol.density, sol, info["discontinuous"])


def _condensed(lam, rho, cutoff, beta):
    return phase_point(beta, lam, rho, cutoff).condensed


def critical_beta(lam: float, rho: float, beta_bracket=(1.0, 500.0), cutoff=AUTO,
                  *, n_scan: int = 9, tol: float = BETA_TOL) -> float:
    """Inverse temperature where condensation sets in at fixed density.

    A coarse geometric scan over the bracket locates sign changes of the
    condensed indicator.  More than one change is reported with a
    :class:`ReentranceWarning`; the lowest-``beta`` change is refined by
    bisection to ``tol``.
    """
    b_lo, b_hi = map(float, beta_bracket)
    if not 0 < b_lo < b_hi:
        raise ValueError("beta_bracket must satisfy 0 < low < high")
    test = partial(_condensed, lam, rho, cutoff)
    betas = np.geomspace(b_lo, b_hi, n_scan)
    flags = [test(b) for b in betas]
    changes = [i for i in range(n_scan - 1) if flags[i] != flags[i + 1]]
    if not changes:
        raise DomainError(
            f"no condensation transition for lambda={lam}, rho={rho} in beta bracket [{b_lo}, {b_hi}]")
    if len(changes) > 1:
        warnings.warn(
            f"condensed indicator changes {len(changes)} times between beta={b_lo} and {b_hi} "
            f"(at intervals {[(betas[i], betas[i + 1]) for i in changes]})", ReentranceWarning)
    i = changes[0]
    lo, hi, f_lo = betas[i], betas[i + 1], flags[i]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if test(mid) == f_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _fraction_at(k, beta, cutoff, lam):
    return phase_point(beta, lam, float(k), cutoff).condensate_fraction


def lambda_critical(k: int, beta_large: float = 200.0, cutoff=AUTO) -> float:
    """Coupling above which integer density ``k`` carries no condensate.

    Scans ``lambda`` upward from ``2k - 0.5`` in steps of 0.05 until the
    condensate fraction at density ``k`` drops below ``1e-3``, then bisects
    the crossing to ``1e-3``.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if beta_large < 100:
        raise ValueError("beta_large must be >= 100 to stand in for zero temperature")
    frac = partial(_fraction_at, k, beta_large, cutoff)
    lams = 2 * k - 0.5 + LAMBDA_STEP * np.arange(int(round(3.0 / LAMBDA_STEP)) + 1)
    prev = None
    for lam in lams:
        below = frac(lam) < FRACTION_THRESHOLD
        if below:
            if prev is None:
                raise DomainError(f"condensate fraction already below threshold at lambda={lam}")
            lo, hi = prev, lam
            while hi - lo > LAMBDA_TOL:
                mid = 0.5 * (lo + hi)
                if frac(mid) < FRACTION_THRESHOLD:
                    hi = mid
                else:
                    lo = mid
            return 0.5 * (lo + hi)
        prev = lam
    raise DomainError(f"no condensate threshold crossing for k={k} in lambda window "
                      f"[{lams[0]}, {lams[-1]}]")


def _point(beta, lam, cutoff, rho):
    return phase_point(beta, lam, rho, cutoff)


def isotherm(lam: float, beta: float, rho_grid, cutoff=AUTO, workers: int = 1):
    """Pressure along an isotherm, one :class:`PhasePoint` per density."""
    rho = np.asarray(rho_grid, dtype=float)
    if rho.ndim != 1 or np.any(rho <= 0) or np.any(np.diff(rho) <= 0):
        raise ValueError("rho_grid must be ascending and positive")
    return parallel_map(partial(_point, beta, lam, cutoff), rho.tolist(), workers)


def condensate_curve(lam: float, beta: float, rho_grid, cutoff=AUTO, workers: int = 1):
    """Condensate fraction against density; same points as :func:`isotherm`."""
    return isotherm(lam, beta, rho_grid, cutoff, workers)


def mott_gap(k: int, lam: float):
    """Zero-temperature chemical-potential window in which ``n = k`` is the
    single-site ground state at ``r = 0``."""
    return 1.0 + 2.0 * lam * (k - 1), 1.0 + 2.0 * lam * k


def lobe_tip(k: int) -> float:
    """Smallest ``lambda`` at which a zero-temperature Mott lobe at density
    ``k`` exists, ``(sqrt(k) + sqrt(k+1))^2 / 2``."""
    return 0.5 * (math.sqrt(k) + math.sqrt(k + 1)) ** 2
