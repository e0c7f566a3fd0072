"""Pressure, density and condensate from the one-parameter variational problem.

The infinite-volume pressure is a supremum over a single real order
parameter r.  For weak on-site repulsion the maximiser moves off r = 0 and a
condensate appears; for strong repulsion at a mid-gap chemical potential the
maximiser stays at r = 0 and the density locks to an integer.
"""
import numpy as np

from mfbh import ModelParams, objective, solve

cases = {
    "weak repulsion": ModelParams(beta=1.0, mu=0.5, lam=0.05),
    "Mott plateau": ModelParams(beta=200.0, mu=6.0, lam=5.0),
    "free gas": ModelParams(beta=1.0, mu=-1.0, lam=0.0),
}

for name, p in cases.items():
    sol = solve(p)
    print(f"{name:15s} r* = {sol.r_star:.6f}  p = {sol.pressure:.8f}  rho = {sol.density:.6f}  "
          f"condensate fraction = {sol.condensate_fraction:.4f}")

# The objective itself: flat at r = 0, one interior maximum at weak coupling.
p = cases["weak repulsion"]
print("\n     r      F(r)")
for r in np.linspace(0.0, 4.0, 9):
    print(f"{r:6.2f}  {objective(p, r):.6f}")
