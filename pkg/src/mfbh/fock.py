"""Truncated single-site Fock space and the effective single-site matrix.

The single-site problem lives on the span of occupation states
``|0>, ..., |N_cut>``.  Everything here is real: after a gauge rotation the
source term ``nu a^* + conj(nu) a`` becomes ``r (a + a^*)`` with ``r = |nu|``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import DomainError

AUTO = "auto"

#: first cutoff tried by the automatic policy
AUTO_START = 32
#: hard cap for the automatic policy
AUTO_CAP = 2**14
#: Gibbs weight allowed in the two highest Fock levels
TOP_WEIGHT_TOL = 1e-12
#: change of ln Z tolerated between successive doublings
LOGZ_TOL = 1e-10

Cutoff = Union[int, str]


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the model plus the Fock-space truncation.

    Parameters
    ----------
    beta : float
        Inverse temperature, strictly positive.
    mu : float
        Chemical potential.
    lam : float
        On-site repulsion ``lambda >= 0``.
    cutoff : int or "auto"
        Largest occupation number kept, or ``"auto"`` for the adaptive policy.
    """

    beta: float
    mu: float
    lam: float
    cutoff: Cutoff = AUTO

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta <= 0:
            raise ValueError(f"beta must be positive and finite, got {self.beta}")
        if not np.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.cutoff != AUTO:
            if isinstance(self.cutoff, bool) or not isinstance(self.cutoff, (int, np.integer)):
                raise ValueError(f"cutoff must be a positive integer or 'auto', got {self.cutoff!r}")
            if self.cutoff < 1:
                raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
            object.__setattr__(self, "cutoff", int(self.cutoff))

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    @property
    def auto_cutoff(self) -> bool:
        return self.cutoff == AUTO


def check_finite_trace(params: ModelParams, r: float = 0.0) -> None:
    """Reject parameter combinations whose single-site trace diverges.

    Without the quartic term the trace of ``exp(beta K(r))`` is finite only
    for ``mu < 1`` and, with the displaced oscillator excluded from the public
    interface, only at ``r = 0``.
    """
    if r < 0 or not np.isfinite(r):
        raise ValueError(f"r must be a finite non-negative number, got {r}")
    if params.lam == 0:
        if r > 0:
            raise DomainError("lambda = 0 admits no source term r > 0 (trace diverges)")
        if params.mu >= 1:
            raise DomainError(f"lambda = 0 requires mu < 1 for a finite trace, got mu = {params.mu}")


@dataclass(frozen=True)
class FockOperators:
    """Dense matrices of ``n``, ``n^2`` and ``a + a^*`` on ``|0>..|N_cut>``."""

    cutoff: int
    number: np.ndarray
    number_sq: np.ndarray
    quad: np.ndarray

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @property
    def annihilation(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.dim, dtype=float)), 1)

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim)


@lru_cache(maxsize=64)
def build_fock_operators(cutoff: int) -> FockOperators:
    """Operators on the truncated Fock space with occupations ``0..cutoff``.

    ``a|n> = sqrt(n)|n-1>`` so ``(a + a^*)[n, n+1] = sqrt(n+1)``.  The returned
    arrays are read-only and shared between callers.
    """
    if isinstance(cutoff, bool) or int(cutoff) != cutoff or cutoff < 1:
        raise ValueError(f"cutoff must be an integer >= 1, got {cutoff!r}")
    cutoff = int(cutoff)
    occ = np.arange(cutoff + 1, dtype=float)
    off = np.sqrt(occ[1:])
    quad = np.diag(off, 1) + np.diag(off, -1)
    ops = FockOperators(cutoff, np.diag(occ), np.diag(occ * occ), quad)
    for m in (ops.number, ops.number_sq, ops.quad):
        m.flags.writeable = False
    return ops


def build_K(params: ModelParams, ops: FockOperators, r: float) -> np.ndarray:
    """Effective single-site matrix ``(mu+lam-1) n - lam n^2 + r (a + a^*)``.

    ``mu n - h`` with ``h = n + lam n (n-1)`` expands to the first two terms.
    The result is tridiagonal and exactly symmetric.
    """
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    occ = np.arange(ops.dim, dtype=float)
    K = r * ops.quad
    K[np.diag_indices(ops.dim)] = (params.mu + params.lam - 1.0) * occ - params.lam * occ * occ
    return K
