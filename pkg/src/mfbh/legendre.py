"""Rate function, duality check, coherent-state lower bound and growth of p~.

The rate function of the order parameter is the convex conjugate

    I(x) = sup_{r >= 0} {2 r x - p~(r)} + p~(0),

and the pressure is recovered as ``sup_x {x^2 - I(x)} + p~(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from ._search import golden_max, grid_local_maxima, safeguarded_newton
from .errors import DomainError, NumericalFailure
from .fock import ModelParams, check_finite_trace
from .gibbs import expectation, gibbs_state, pressure_tilde, quad_response, with_resolved_cutoff
from .varsolve import solve

#: the dual objective is stationary at its maximum, so an x error of 1e-6
#: costs ~1e-12 in pressure
DUAL_XTOL = 1e-6
#: e^-40 relative tail is dropped from the phase-space integral
TAIL_EXPONENT = 40.0
QUAD_RTOL = 1e-8
QUAD_START = (128, 64)
QUAD_MAX_NODES = 4096


@dataclass(frozen=True)
class RateFunctionTable:
    x_grid: np.ndarray
    I_values: np.ndarray
    r_argmax: np.ndarray
    p_tilde_zero: float


def _require_quartic(params: ModelParams) -> None:
    if params.lam <= 0:
        raise DomainError("the rate function needs lambda > 0")


def _slope(fixed: ModelParams, r: float) -> float:
    st = gibbs_state(fixed, r)
    return expectation(st, st.ops.quad)


def _conjugate_bracket(params: ModelParams, x: float) -> float:
    """Upper end ``r`` with ``p~'(r) > 2x`` (uses the unfixed cutoff policy)."""
    hi = max(1.0, 2.0 * x)
    for _ in range(40):
        fixed = with_resolved_cutoff(params, hi) if params.auto_cutoff else params
        if _slope(fixed, hi) > 2.0 * x:
            return hi
        hi *= 2.0
    raise NumericalFailure(f"no r with <a + a^*> > 2x found for x = {x}")


def _conjugate_point(fixed: ModelParams, x: float, hi: float, p0: float, r0=None):
    if x == 0.0:
        return 0.0, 0.0

    def excess(r):
        q, dq = quad_response(gibbs_state(fixed, r))
        return 2.0 * x - q, -dq

    r = safeguarded_newton(excess, 0.0, hi, x0=r0, fprime=True, gtol=1e-15)
    return r, 2.0 * r * x - pressure_tilde(fixed, r) + p0


def rate_function(params: ModelParams, x_grid) -> RateFunctionTable:
    """Tabulate ``I(x)`` on an ascending grid of ``x >= 0``.

    Each supremum is concave in ``r`` (``p~`` is convex), so it is located as
    the root of ``<a + a^*>_r = 2x``.
    """
    _require_quartic(params)
    x = np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or np.any(x < 0) or np.any(np.diff(x) < 0):
        raise ValueError("x_grid must be a one-dimensional ascending grid of non-negative values")
    hi = _conjugate_bracket(params, float(x.max(initial=0.0)))
    fixed = with_resolved_cutoff(params, hi) if params.auto_cutoff else params
    p0 = pressure_tilde(fixed, 0.0)
    out, r_prev = [], None
    for xi in x:
        out.append(_conjugate_point(fixed, xi, hi, p0, r_prev))
        r_prev = out[-1][0] or None
    return RateFunctionTable(x, np.array([o[1] for o in out]), np.array([o[0] for o in out]), p0)


def rate_value(params: ModelParams, x: float) -> float:
    """``I(x)`` at a single point."""
    return float(rate_function(params, [x]).I_values[0])


def duality_gap(params: ModelParams) -> float:
    """``|sup_x {x^2 - I(x)} + p~(0) - sup_r {-r^2 + p~(r)}|``.

    Both suprema are found independently by grid scan plus golden-section
    refinement; only the second goes through :func:`solve`.
    """
    _require_quartic(params)
    direct = solve(params).pressure
    x_max = 4.0
    for _ in range(10):
        hi = _conjugate_bracket(params, x_max)
        fixed = with_resolved_cutoff(params, hi) if params.auto_cutoff else params
        p0 = pressure_tilde(fixed, 0.0)

        warm = [None]

        def dual(x):
            r, I = _conjugate_point(fixed, x, hi, p0, warm[0])
            warm[0] = r or None
            return x * x - I + p0

        grid = np.linspace(0.0, x_max, 41)
        vals = np.array([dual(x) for x in grid])
        if np.argmax(vals) < grid.size - 1:
            break
        x_max *= 2.0
    else:
        raise NumericalFailure("dual objective still increasing at the edge of the x range")
    best = vals.max()
    for i in grid_local_maxima(vals):
        lo, up = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        best = max(best, golden_max(dual, lo, up, tol=DUAL_XTOL)[1])
    return abs(best - direct)


def _phase_space_log_integral(params: ModelParams, r: float, s_lo: float, s_hi: float,
                              ns: int, nt: int, shift: float) -> float:
    xs, ws = leggauss(ns)
    xt, wt = leggauss(nt)
    s = 0.5 * (s_hi - s_lo) * xs + 0.5 * (s_hi + s_lo)
    ws = 0.5 * (s_hi - s_lo) * ws
    theta = 0.5 * np.pi * (xt + 1.0)  # [0, pi]; the integrand is even in theta
    wt = 0.5 * np.pi * wt
    b = params.beta
    expo = b * ((params.mu - 1.0) * s * s - params.lam * s ** 4)[:, None] \
        + b * 2.0 * r * np.outer(s, np.cos(theta)) - shift
    total = np.sum((ws * s)[:, None] * wt[None, :] * np.exp(expo)) * 2.0 / np.pi
    return np.log(total) + shift


def berezin_lieb_lower_bound(params: ModelParams, r: float) -> float:
    """Coherent-state lower bound on ``p~(r)``.

    Replaces ``Tr exp(beta K(r))`` by the phase-space integral of
    ``exp(beta <z|K(r)|z>)`` with ``<z|K(r)|z> = (mu-1)|z|^2 - lam |z|^4 + 2 r Re z``,
    evaluated by tensor Gauss-Legendre quadrature in polar coordinates.
    """
    _require_quartic(params)
    check_finite_trace(params, r)
    mu, lam, beta = params.mu, params.lam, params.beta

    def g(s):
        return (mu - 1.0) * s * s - lam * s ** 4 + 2.0 * r * s

    # stationary points of g on s >= 0
    roots = np.roots([-4.0 * lam, 0.0, 2.0 * (mu - 1.0), 2.0 * r])
    crit = [0.0] + [z.real for z in roots if abs(z.imag) < 1e-9 and z.real > 0]
    s_peak = max(crit, key=g)
    g_peak = g(s_peak)
    drop = TAIL_EXPONENT / beta

    def below(s):
        return g(s) - (g_peak - drop)

    s_hi = max(s_peak, 1.0)
    while below(s_hi) > 0:
        s_hi *= 2.0
    s_hi = brentq(below, s_peak, s_hi) if s_hi > s_peak else s_hi
    s_lo = brentq(below, 0.0, s_peak) if s_peak > 0 and below(0.0) < 0 else 0.0

    shift = beta * g_peak
    ns, nt = QUAD_START
    prev = _phase_space_log_integral(params, r, s_lo, s_hi, ns, nt, shift)
    while max(ns, nt) < QUAD_MAX_NODES:
        ns, nt = 2 * ns, 2 * nt
        cur = _phase_space_log_integral(params, r, s_lo, s_hi, ns, nt, shift)
        if abs(np.expm1(cur - prev)) < QUAD_RTOL:
            return cur / beta
        prev = cur
    raise NumericalFailure(f"phase-space quadrature did not converge (r = {r})")


def growth_exponent(params: ModelParams, nu_min: float, nu_max: float, n_points: int) -> float:
    """Least-squares slope of ``ln p~(nu)`` against ``ln nu`` on a geometric grid."""
    _require_quartic(params)
    if not 0 < nu_min < nu_max:
        raise ValueError("need 0 < nu_min < nu_max")
    if n_points < 4:
        raise ValueError("need at least 4 points")
    nu = np.geomspace(nu_min, nu_max, n_points)
    p = np.array([pressure_tilde(params, v) for v in nu])
    if np.any(p <= 0):
        raise DomainError("p~ is not positive on the requested range; raise nu_min")
    return float(np.polyfit(np.log(nu), np.log(p), 1)[0])
