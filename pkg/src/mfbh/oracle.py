"""Exact diagonalisation of the complete-graph model at small ``V``.

    H_V = -(1/V) sum_{x,y} a_x^* a_y + sum_x h_x,   h_x = n_x + lam n_x (n_x - 1),

with every site truncated at occupation ``M``.  ``H_V`` conserves the total
particle number, so it is built block by block over sectors of fixed ``N``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .fock import ModelParams, build_fock_operators
from .gibbs import DensityMatrix
from .spectrum import eigvals_symmetric, log_sum_exp
from .varsolve import solve

MAX_DIM = 10**5


@dataclass(frozen=True)
class Sector:
    particles: int
    basis: np.ndarray  # (dim, V) occupation tuples, lexicographic
    hamiltonian: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


@dataclass(frozen=True)
class FiniteSystem:
    V: int
    site_cutoff: int
    lam: float
    sectors: Tuple[Sector, ...]

    @property
    def dim(self) -> int:
        return (self.site_cutoff + 1) ** self.V


def _onsite(n, lam):
    return n + lam * n * (n - 1)


def build_finite_system(V: int, site_cutoff: int, lam: float) -> FiniteSystem:
    """Sector-blocked Hamiltonian of ``V`` sites with occupations ``0..site_cutoff``.

    Raises ``ValueError`` if the full space exceeds ``1e5`` states.
    """
    if V < 1 or site_cutoff < 1:
        raise ValueError("need V >= 1 and site_cutoff >= 1")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    M = site_cutoff
    if (M + 1) ** V > MAX_DIM:
        raise ValueError(f"(M+1)^V = {(M + 1) ** V} exceeds the dimension guard {MAX_DIM}")

    by_n = {}
    for occ in itertools.product(range(M + 1), repeat=V):
        by_n.setdefault(sum(occ), []).append(occ)

    sectors = []
    for N in sorted(by_n):
        basis = by_n[N]
        index = {occ: i for i, occ in enumerate(basis)}
        H = np.zeros((len(basis), len(basis)))
        for i, occ in enumerate(basis):
            n = np.array(occ, dtype=float)
            H[i, i] = np.sum(_onsite(n, lam)) - n.sum() / V
            for x in range(V):
                if occ[x] == M:
                    continue
                for y in range(V):
                    if y == x or occ[y] == 0:
                        continue
                    new = list(occ)
                    new[x] += 1
                    new[y] -= 1
                    # <new| a_x^* a_y |occ>
                    H[index[tuple(new)], i] -= np.sqrt((occ[x] + 1) * occ[y]) / V
        sectors.append(Sector(N, np.array(basis, dtype=int).reshape(len(basis), V), H))
    return FiniteSystem(V, M, float(lam), tuple(sectors))


def full_hamiltonian(system: FiniteSystem) -> np.ndarray:
    """Sector blocks scattered into the product basis ``|n_1 ... n_V>``."""
    d = system.site_cutoff + 1
    H = np.zeros((system.dim, system.dim))
    weights = d ** np.arange(system.V - 1, -1, -1)
    for sec in system.sectors:
        idx = sec.basis @ weights
        H[np.ix_(idx, idx)] = sec.hamiltonian
    return H


def pair_form_hamiltonian(V: int, site_cutoff: int, lam: float) -> np.ndarray:
    """``(1/2V) sum_{x,y} (a_x^* - a_y^*)(a_x - a_y) + lam sum_x n_x (n_x - 1)``
    assembled from Kronecker products in the product basis."""
    ops = build_fock_operators(site_cutoff)
    a = ops.annihilation
    n = ops.number
    eye = np.eye(ops.dim)

    def at(op, x):
        mats = [eye] * V
        mats[x] = op
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    A = [at(a, x) for x in range(V)]
    H = sum(lam * at(n @ n - n, x) for x in range(V))
    for x in range(V):
        for y in range(V):
            D = A[x] - A[y]
            H = H + D.T @ D / (2.0 * V)
    return H


def number_operator(system: FiniteSystem) -> np.ndarray:
    d = system.site_cutoff + 1
    occ = np.array(list(itertools.product(range(d), repeat=system.V)))
    return np.diag(occ.sum(axis=1).astype(float))


def finite_pressure(system: FiniteSystem, beta: float, mu: float) -> float:
    """``(1/(beta V)) ln Tr exp(beta (mu N - H_V))`` by per-sector eigensolves."""
    exps = [mu * sec.particles - eigvals_symmetric(sec.hamiltonian) for sec in system.sectors]
    return log_sum_exp(np.concatenate(exps), beta) / (beta * system.V)


def gibbs_density_matrix(system: FiniteSystem, beta: float, mu: float) -> DensityMatrix:
    """Grand-canonical Gibbs state in the product basis."""
    H = full_hamiltonian(system)
    return DensityMatrix.gibbs(mu * number_operator(system) - H, beta)


def reduced_density_matrix(rho, V: int, site_cutoff: int, keep) -> np.ndarray:
    """Partial trace of a product-basis matrix onto the sites in ``keep``."""
    d = site_cutoff + 1
    keep = sorted(keep)
    drop = [x for x in range(V) if x not in keep]
    t = np.asarray(rho).reshape([d] * (2 * V))
    perm = keep + drop + [V + x for x in keep] + [V + x for x in drop]
    t = t.transpose(perm)
    k, m = d ** len(keep), d ** len(drop)
    t = t.reshape(k, m, k, m)
    return np.einsum("ajbj->ab", t)


def convergence_report(beta: float, mu: float, lam: float, site_cutoff: int, V_list) -> List[tuple]:
    """``(V, p_V, |p_V - p_var|)`` for each ``V``.

    ``p_var`` is the variational pressure at the same per-site cutoff, so the
    deviation isolates the finite-``V`` error.
    """
    p_var = solve(ModelParams(beta, mu, lam, cutoff=site_cutoff)).pressure
    out = []
    for V in V_list:
        pV = finite_pressure(build_finite_system(V, site_cutoff, lam), beta, mu)
        out.append((V, pV, abs(pV - p_var)))
    return out
