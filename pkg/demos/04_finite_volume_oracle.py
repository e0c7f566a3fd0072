"""Exact diagonalisation of small complete-graph systems.

The per-site pressure of V sites approaches the variational value computed
with the same occupation cutoff as V grows.
"""
from mfbh import ModelParams, convergence_report, solve

beta, mu, lam, M = 1.0, 0.5, 1.0, 3
print(f"variational pressure (cutoff {M}): {solve(ModelParams(beta, mu, lam, cutoff=M)).pressure:.6f}")
print(" V      p_V       deviation")
for V, pV, dev in convergence_report(beta, mu, lam, M, range(1, 8)):
    print(f"{V:2d}  {pV:.6f}  {dev:.6f}")
