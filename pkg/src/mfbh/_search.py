"""Scalar search helpers shared by the variational and Legendre solvers."""

from __future__ import annotations

import math

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, tol=1e-8, maxiter=200):
    """Golden-section search for a maximum of ``f`` on ``[lo, hi]``.

    Returns the best ``(x, f(x))`` among all evaluated points, endpoints
    included, so the result never falls below either end of the bracket.
    """
    best = max(((lo, f(lo)), (hi, f(hi))), key=lambda t: t[1])
    a, b = lo, hi
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = f(x2)
    for cand in ((x1, f1), (x2, f2)):
        if cand[1] > best[1]:
            best = cand
    return best


def safeguarded_newton(g, lo, hi, x0=None, xtol=1e-13, gtol=1e-14, maxiter=100, step=1e-6,
                       fprime=False):
    """Root of a decreasing function ``g`` with ``g(lo) > 0 > g(hi)``.

    Newton steps use a central-difference derivative unless ``fprime`` is
    set, in which case ``g`` returns ``(value, derivative)``.  Any step
    leaving the current bracket is replaced by bisection.
    """
    x = 0.5 * (lo + hi) if x0 is None else min(max(x0, lo), hi)
    for _ in range(maxiter):
        if fprime:
            gx, dg = g(x)
        else:
            gx = g(x)
        if abs(gx) <= gtol:
            return x
        if gx > 0:
            lo = x
        else:
            hi = x
        if hi - lo <= xtol:
            return 0.5 * (lo + hi)
        if not fprime:
            h = step * max(1.0, abs(x))
            if x - h >= 0.0:
                dg = (g(x + h) - g(x - h)) / (2.0 * h)
            else:
                dg = (g(x + h) - gx) / h
        xn = x - gx / dg if dg < 0 else None
        if xn is None or not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= xtol:
            return xn
        x = xn
    return x


def scan_grid(r_max, n_linear=49, n_geometric=12):
    """Union of a linear grid on ``[0, r_max]`` and a geometric grid near 0."""
    lin = np.linspace(0.0, r_max, n_linear)
    geo = np.geomspace(1e-4 * lin[1], lin[1], n_geometric, endpoint=False)
    return np.unique(np.concatenate([lin, geo]))


def grid_local_maxima(values):
    """Indices ``i`` with ``values[i]`` at least as large as both neighbours."""
    v = np.asarray(values)
    idx = []
    for i in range(v.size):
        left = i == 0 or v[i] >= v[i - 1]
        right = i == v.size - 1 or v[i] >= v[i + 1]
        if left and right and not (idx and idx[-1] == i - 1):
            idx.append(i)
    return idx
