"""The scalar variational problem for the pressure.

    p(beta, mu, lam) = sup_{r >= 0} F(r),   F(r) = -r^2 + p~(r).

A global grid scan finds every local maximum of ``F``; each is refined by
golden-section search and then polished on the gap equation
``<a + a^*>_r = 2 r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._search import golden_max, grid_local_maxima, safeguarded_newton, scan_grid
from .errors import DomainError, NumericalFailure
from .fock import ModelParams, check_finite_trace
from .gibbs import expectation, gibbs_state, pressure_tilde, with_resolved_cutoff

GOLDEN_TOL = 1e-8
BRANCH_TOL = 1e-8
GAP_TOL = 1e-6
#: a stationary point this close to the origin is taken to be r = 0
ZERO_SNAP = 1e-10
MAX_EXPANSIONS = 12


@dataclass(frozen=True)
class VariationalSolution:
    """Maximiser of ``F`` and the thermodynamics evaluated there.

    ``degenerate_branch`` is set when a second local maximum at
    ``competing_r`` reaches the same pressure within ``1e-8``; ``r_star`` is
    then the larger of the two.
    """

    params: ModelParams
    r_star: float
    pressure: float
    density: float
    number_sq_mean: float
    gap_residual: float
    degenerate_branch: bool = False
    competing_r: Optional[float] = None
    cutoff: Optional[int] = None

    @property
    def condensate_density(self) -> float:
        return self.r_star ** 2

    @property
    def condensate_fraction(self) -> float:
        return self.r_star ** 2 / self.density if self.density > 0 else 0.0

    def as_record(self) -> dict:
        p = self.params
        return {
            "beta": p.beta, "mu": p.mu, "lambda": p.lam,
            "r_star": self.r_star, "pressure": self.pressure, "density": self.density,
            "n2_mean": self.number_sq_mean, "condensate_fraction": self.condensate_fraction,
            "degenerate_branch": self.degenerate_branch,
        }


def objective(params: ModelParams, r: float) -> float:
    """``F(r) = -r^2 + p~(r)``."""
    return -r * r + pressure_tilde(params, r)


def _check_solvable(params: ModelParams) -> None:
    if params.lam == 0 and params.mu >= 0:
        raise DomainError(
            f"objective unbounded in r for lambda = 0 and mu = {params.mu} >= 0")
    check_finite_trace(params, 0.0)


def _finish(params, fixed, r, F, degenerate=False, competing=None) -> VariationalSolution:
    st = gibbs_state(fixed, r)
    ops = st.ops
    q = expectation(st, ops.quad)
    return VariationalSolution(
        params=params, r_star=float(r), pressure=float(F),
        density=expectation(st, ops.number), number_sq_mean=expectation(st, ops.number_sq),
        gap_residual=abs(2.0 * r - q), degenerate_branch=degenerate,
        competing_r=competing, cutoff=st.cutoff)


def _refine(fixed: ModelParams, F, lo: float, hi: float):
    """Best local maximiser of ``F`` inside ``[lo, hi]``."""

    def gap(r):
        st = gibbs_state(fixed, r)
        return expectation(st, st.ops.quad) - 2.0 * r

    r_hat, f_hat = golden_max(F, lo, hi, tol=GOLDEN_TOL)
    lo_probe = lo if lo > 0 else ZERO_SNAP
    g_lo, g_hi = gap(lo_probe), gap(hi)
    if g_lo > 0 > g_hi:
        root = safeguarded_newton(gap, lo_probe, hi, x0=r_hat if r_hat > lo_probe else None)
        f_root = F(root)
        if f_root >= f_hat - 1e-12:
            return root, f_root
    if lo == 0.0 and g_lo <= 0:
        return 0.0, F(0.0)
    return r_hat, f_hat


def solve(params: ModelParams) -> VariationalSolution:
    """Maximise ``-r^2 + p~(r)`` over ``r >= 0``.

    Raises
    ------
    DomainError
        ``lambda = 0`` with ``mu >= 0``, where the objective is unbounded.
    NumericalFailure
        The cutoff policy or the search range failed to converge.
    """
    _check_solvable(params)
    if params.lam == 0:
        fixed = params if not params.auto_cutoff else with_resolved_cutoff(params, 0.0)
        return _finish(params, fixed, 0.0, pressure_tilde(fixed, 0.0))

    st0 = gibbs_state(params, 0.0)
    r_max = max(4.0, 4.0 * (expectation(st0, st0.ops.number) + 1.0))
    for _ in range(MAX_EXPANSIONS):
        fixed = with_resolved_cutoff(params, r_max) if params.auto_cutoff else params
        grid = scan_grid(r_max)
        values = np.array([objective(fixed, r) for r in grid])
        if np.argmax(values) < grid.size - 1:
            break
        r_max *= 2.0
    else:
        raise NumericalFailure(f"objective still increasing at r = {r_max}")

    F = lambda r: objective(fixed, r)  # noqa: E731
    cands = []
    for i in grid_local_maxima(values):
        lo = grid[i - 1] if i > 0 else 0.0
        hi = grid[min(i + 1, grid.size - 1)]
        r, f = _refine(fixed, F, lo, hi)
        if f < values[i]:
            r, f = grid[i], values[i]
        cands.append((r, f))

    cands.sort(key=lambda t: -t[1])
    r_best, f_best = cands[0]
    rivals = [c for c in cands[1:] if f_best - c[1] < BRANCH_TOL and abs(c[0] - r_best) > 1e-6]
    if rivals:
        pair = sorted([cands[0], max(rivals, key=lambda t: t[0])], key=lambda t: t[0])
        (r_small, _), (r_large, f_large) = pair
        return _finish(params, fixed, r_large, max(f_best, f_large), True, r_small)
    return _finish(params, fixed, r_best, f_best)


def density_of_mu(params: ModelParams) -> float:
    """Density ``<n>`` at the maximiser, i.e. ``dp/dmu`` by the envelope theorem."""
    return solve(params).density
