"""Dense real-symmetric eigendecomposition and a stable log-sum-exp.

Two routes compute the same decomposition:

``"lapack"``
    :func:`numpy.linalg.eigh`, used on every hot path.
``"ql"``
    Householder reduction to tridiagonal form followed by implicit-shift QL,
    written out here.  It is exact enough to serve as a cross-check and is
    kept for matrices where a dependency-free route is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import NumericalFailure

SYMMETRY_RTOL = 1e-12
SWEEPS_PER_EIGENVALUE = 64


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.T


def _check_symmetric(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = max(np.abs(A).max(initial=0.0), 1.0)
    if np.abs(A - A.T).max(initial=0.0) > SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")
    return A


def householder_tridiagonalize(A):
    """Reduce a symmetric matrix to tridiagonal form.

    Returns
    -------
    diag, offdiag, Q : ndarray
        ``A = Q T Q^T`` where ``T`` has ``diag`` on the diagonal and
        ``offdiag`` on both neighbouring diagonals.
    """
    a = np.array(A, dtype=float)
    n = a.shape[0]
    Q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0 or np.linalg.norm(x[1:]) == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(xnorm, x[0])
        v /= np.linalg.norm(v)
        a[k + 1:, k:] -= 2.0 * np.outer(v, v @ a[k + 1:, k:])
        a[k:, k + 1:] -= 2.0 * np.outer(a[k:, k + 1:] @ v, v)
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v)
    return np.diag(a).copy(), np.diag(a, -1).copy(), Q


def tridiagonal_ql(diag, offdiag, Z=None, max_sweeps=SWEEPS_PER_EIGENVALUE):
    """Implicit-shift QL iteration on a symmetric tridiagonal matrix.

    ``Z`` (identity by default) is updated in place with the accumulated
    rotations, so passing the ``Q`` of :func:`householder_tridiagonalize`
    yields eigenvectors of the original matrix.  Output is unsorted.
    """
    d = np.array(diag, dtype=float)
    n = d.shape[0]
    e = np.zeros(n)
    e[: n - 1] = offdiag
    Z = np.eye(n) if Z is None else Z
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise NumericalFailure(
                    f"QL iteration did not converge within {max_sweeps} sweeps "
                    f"for eigenvalue {l} of a {n}x{n} matrix")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = Z[:, i + 1].copy()
                Z[:, i + 1] = s * Z[:, i] + c * zi1
                Z[:, i] = c * Z[:, i] - s * zi1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, Z


def eig_symmetric(A, method: str = "lapack") -> SpectralDecomposition:
    """Eigendecomposition of a real symmetric matrix.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Symmetric to within ``1e-12`` relative.
    method : {"lapack", "ql"}
        Backend, see the module docstring.

    Returns
    -------
    SpectralDecomposition
        Ascending eigenvalues with matching orthonormal columns.
    """
    A = _check_symmetric(A)
    if method == "lapack":
        try:
            w, V = np.linalg.eigh(A)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"eigensolver failed on a {A.shape[0]}x{A.shape[0]} matrix") from exc
        return SpectralDecomposition(w, V)
    if method != "ql":
        raise ValueError(f"unknown method {method!r}")
    n = A.shape[0]
    if n == 1:
        return SpectralDecomposition(A[0].copy(), np.ones((1, 1)))
    d, e, Q = householder_tridiagonalize(A)
    w, V = tridiagonal_ql(d, e, Q)
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], V[:, order])


def eigvals_symmetric(A) -> np.ndarray:
    """Ascending eigenvalues only."""
    return np.linalg.eigvalsh(_check_symmetric(A))


def log_sum_exp(values, scale: float = 1.0) -> float:
    """``ln sum_i exp(scale * v_i)`` with the largest term factored out."""
    a = scale * np.asarray(values, dtype=float)
    if a.size == 0:
        raise ValueError("log_sum_exp of an empty sequence")
    m = a.max()
    if not np.isfinite(m):
        return float(logsumexp(a))
    return float(m + np.log(np.exp(a - m).sum()))
