"""Finite-dimensional relative-entropy identity behind the variational formula.

For phi the Gibbs state of K + A and omega that of K,
S(phi || omega) = beta phi(A) - ln Z(K + A) + ln Z(K) holds exactly, and
for any other state the right-hand side is only a lower bound.
"""
import numpy as np

from mfbh import ModelParams, entropy_identity_residual
from mfbh.gibbs import DensityMatrix, entropy_lower_bound, gibbs_state, relative_entropy

p = ModelParams(beta=1.0, mu=0.5, lam=1.0)
for nu in (0.0, 0.7, 1.5j, 2.0 - 1.0j):
    print(f"nu = {nu!s:>8}: identity residual {entropy_identity_residual(p, nu):.2e}")

fixed = p.replace(cutoff=12)
omega = gibbs_state(fixed).density_matrix()
rng = np.random.default_rng(0)
B = rng.normal(size=(13, 13))
A = 0.5 * (B + B.T) / np.linalg.norm(B, 2)
G = rng.normal(size=(13, 13))
phi = DensityMatrix.from_matrix(G @ G.T / np.trace(G @ G.T))
print(f"\nrandom state: bound {entropy_lower_bound(fixed, phi, A):.4f} <= S {relative_entropy(phi, omega):.4f}")
