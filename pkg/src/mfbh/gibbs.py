"""Single-site Gibbs states, the perturbed pressure and relative entropy.

The perturbed pressure is

    p~(r) = (1/beta) ln Tr exp(beta K(r)),   K(r) = (mu+lam-1) n - lam n^2 + r (a + a^*),

and the reference state is the Gibbs state of ``K(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import NumericalFailure
from .fock import ModelParams, build_fock_operators, build_K, check_finite_trace
from .spectrum import SpectralDecomposition, eig_symmetric, eigvals_symmetric, log_sum_exp

SUPPORT_TOL = 1e-12
LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class GibbsState:
    """Gibbs state of ``K(r)`` at a definite cutoff.

    ``weights[i]`` is the probability of eigenvector ``i`` (ascending
    eigenvalue order); ``log_weights`` holds the same numbers as exact
    logarithms, which survive where the weights themselves underflow.
    """

    params: ModelParams
    r: float
    decomposition: SpectralDecomposition
    log_partition: float
    log_weights: np.ndarray

    @property
    def cutoff(self) -> int:
        return self.decomposition.dim - 1

    @property
    def ops(self) -> fock.FockOperators:
        return build_fock_operators(self.cutoff)

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def pressure(self) -> float:
        return self.log_partition / self.params.beta

    def fock_populations(self) -> np.ndarray:
        """Diagonal of the density matrix in the occupation basis."""
        V = self.decomposition.eigenvectors
        return (V * V) @ self.weights

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.weights, self.decomposition.eigenvectors, self.log_weights)


def _state_at(params: ModelParams, r: float, cutoff: int) -> GibbsState:
    ops = build_fock_operators(cutoff)
    dec = eig_symmetric(build_K(params, ops, r))
    logz = log_sum_exp(dec.eigenvalues, params.beta)
    return GibbsState(params.replace(cutoff=cutoff), float(r), dec, logz,
                      params.beta * dec.eigenvalues - logz)


def _auto_state(params: ModelParams, r: float) -> GibbsState:
    prev = _state_at(params, r, fock.AUTO_START)
    n = fock.AUTO_START
    while n < fock.AUTO_CAP:
        n *= 2
        cur = _state_at(params, r, n)
        top = cur.fock_populations()[-2:].sum()
        if top < fock.TOP_WEIGHT_TOL and abs(cur.log_partition - prev.log_partition) < fock.LOGZ_TOL:
            return cur
        prev = cur
    raise NumericalFailure(
        f"occupation cutoff did not converge below {fock.AUTO_CAP} "
        f"(beta={params.beta}, mu={params.mu}, lambda={params.lam}, r={r})")


def gibbs_state(params: ModelParams, r: float = 0.0) -> GibbsState:
    """Gibbs state of ``K(r)``, resolving ``cutoff="auto"`` if requested."""
    check_finite_trace(params, r)
    if params.auto_cutoff:
        return _auto_state(params, r)
    return _state_at(params, r, params.cutoff)


def resolve_cutoff(params: ModelParams, r: float = 0.0) -> int:
    """Concrete cutoff the automatic policy settles on at source strength ``r``."""
    if not params.auto_cutoff:
        return params.cutoff
    return gibbs_state(params, r).cutoff


def with_resolved_cutoff(params: ModelParams, r: float) -> ModelParams:
    """Copy of ``params`` with the cutoff frozen at the value needed for ``r``.

    The required cutoff grows with ``r``, so freezing it at the largest ``r``
    of a search keeps every smaller ``r`` converged as well.
    """
    return params.replace(cutoff=resolve_cutoff(params, r))


def pressure_tilde(params: ModelParams, r: float = 0.0) -> float:
    """Perturbed single-site pressure ``(1/beta) ln Tr exp(beta K(r))``."""
    check_finite_trace(params, r)
    if params.auto_cutoff:
        return _auto_state(params, r).pressure
    w = eigvals_symmetric(build_K(params, build_fock_operators(params.cutoff), r))
    return log_sum_exp(w, params.beta) / params.beta


def expectation(state: GibbsState, observable) -> float:
    """Thermal average ``sum_i w_i <v_i|O|v_i>`` of a symmetric matrix."""
    O = np.asarray(observable, dtype=float)
    dim = state.decomposition.dim
    if O.shape != (dim, dim):
        raise ValueError(f"observable has shape {O.shape}, state has dimension {dim}")
    V = state.decomposition.eigenvectors
    diag = np.einsum("ij,ij->j", V, O @ V)
    return float(diag @ state.weights)


def quad_response(state: GibbsState):
    """``<a + a^*>`` and its derivative with respect to ``r``.

    The derivative is ``p~''(r)``, obtained from divided differences of the
    Gibbs weights in the eigenbasis (no finite differencing).
    """
    dec = state.decomposition
    Qe = dec.eigenvectors.T @ state.ops.quad @ dec.eigenvectors
    w = state.weights
    eps = dec.eigenvalues
    beta = state.params.beta
    de = eps[:, None] - eps[None, :]
    dw = w[:, None] - w[None, :]
    close = np.abs(de) < 1e-12 * max(1.0, np.abs(eps).max())
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel = np.where(close, beta * 0.5 * (w[:, None] + w[None, :]), dw / np.where(close, 1.0, de))
    q = float(np.diag(Qe) @ w)
    return q, float(np.sum(Qe * Qe * kernel) - beta * q * q)


def quad_expectation(params: ModelParams, r: float) -> float:
    """``<a + a^*>`` in the Gibbs state of ``K(r)``; equals ``d p~ / d r``."""
    st = gibbs_state(params, r)
    return expectation(st, st.ops.quad)


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix held by its spectral decomposition.

    ``log_eigenvalues`` may carry exact logarithms (Gibbs states) so that
    eigenvalues far below double-precision range keep a finite log.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    log_eigenvalues: np.ndarray
    exact_logs: bool = True

    @classmethod
    def from_matrix(cls, rho) -> "DensityMatrix":
        rho = np.asarray(rho, dtype=float)
        dec = eig_symmetric(0.5 * (rho + rho.T))
        p = np.clip(dec.eigenvalues, 0.0, None)
        with np.errstate(divide="ignore"):
            logp = np.where(p > LOG_FLOOR, np.log(np.where(p > LOG_FLOOR, p, 1.0)), -np.inf)
        return cls(p, dec.eigenvectors, logp, exact_logs=False)

    @classmethod
    def gibbs(cls, H, beta: float = 1.0) -> "DensityMatrix":
        """``exp(beta H) / Tr exp(beta H)`` for a symmetric ``H``."""
        dec = eig_symmetric(H)
        logp = beta * dec.eigenvalues - log_sum_exp(dec.eigenvalues, beta)
        return cls(np.exp(logp), dec.eigenvectors, logp)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.T

    def expect(self, observable) -> float:
        return float(np.trace(self.matrix @ np.asarray(observable, dtype=float)))


def relative_entropy(phi: DensityMatrix, omega: DensityMatrix) -> float:
    """Umegaki relative entropy ``Tr phi (ln phi - ln omega)``.

    Evaluated in the eigenbasis of ``omega``.  Returns ``inf`` when ``phi``
    puts weight above ``1e-12`` on a direction where ``omega`` has no
    usable logarithm.
    """
    if phi.dim != omega.dim:
        raise ValueError(f"dimension mismatch: {phi.dim} vs {omega.dim}")
    p = phi.eigenvalues
    live = (p > 0) & np.isfinite(phi.log_eigenvalues)
    self_term = float(np.sum(p[live] * phi.log_eigenvalues[live]))
    # diagonal of phi in the eigenbasis of omega
    U = phi.eigenvectors.T @ omega.eigenvectors
    pd = (U * U).T @ p
    logw = omega.log_eigenvalues
    null = ~np.isfinite(logw)
    if not omega.exact_logs:
        null |= omega.eigenvalues < SUPPORT_TOL
    if np.any(pd[null] > SUPPORT_TOL):
        return float("inf")
    S = self_term - float(np.sum(pd[~null] * logw[~null]))
    # roundoff can push an exact zero slightly negative
    return 0.0 if -1e-12 < S < 0.0 else S


def entropy_identity_residual(params: ModelParams, nu: complex) -> float:
    """Mismatch in the finite-dimensional relative-entropy identity.

    With ``A = nu a^* + conj(nu) a``, ``phi`` the Gibbs state of ``K + A`` and
    ``omega`` that of ``K``, returns

        | S(phi || omega) - (beta phi(A) - beta p~(|nu|) + beta p~(0)) |.

    The phase of ``nu`` is rotated away, which leaves both sides unchanged.
    """
    r = abs(complex(nu))
    check_finite_trace(params, r)
    if params.auto_cutoff:
        params = with_resolved_cutoff(params, r)
    phi_state = gibbs_state(params, r)
    omega_state = gibbs_state(params, 0.0)
    S = relative_entropy(phi_state.density_matrix(), omega_state.density_matrix())
    A = r * phi_state.ops.quad
    rhs = params.beta * expectation(phi_state, A) - phi_state.log_partition + omega_state.log_partition
    return abs(S - rhs)


def entropy_lower_bound(params: ModelParams, phi: DensityMatrix, A) -> float:
    """``beta phi(A) - ln Tr e^{beta(K(0) + A)} + ln Tr e^{beta K(0)}``.

    For every self-adjoint ``A`` this never exceeds ``S(phi || omega)``.
    ``params`` must carry a fixed cutoff matching the dimension of ``phi``.
    """
    if params.auto_cutoff:
        raise ValueError("entropy_lower_bound needs a fixed cutoff")
    ops = build_fock_operators(params.cutoff)
    K0 = build_K(params, ops, 0.0)
    A = np.asarray(A, dtype=float)
    lz_a = log_sum_exp(eigvals_symmetric(K0 + A), params.beta)
    lz_0 = log_sum_exp(np.diag(K0), params.beta)
    return params.beta * phi.expect(A) - lz_a + lz_0
