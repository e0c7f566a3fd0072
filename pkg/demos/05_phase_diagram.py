"""Fixed-density views: isotherm, condensate fraction and the critical coupling.

Densities are reached by inverting rho(mu).  At low temperature the unit
density loses its condensate once lambda passes the critical value; half
filling always condenses.
"""
import numpy as np

from mfbh import condensate_curve, critical_beta, isotherm, lambda_critical
from mfbh.phase import lobe_tip

print("isotherm lambda = 5, beta = 2")
print("  rho     v = 1/rho   pressure   cond. fraction")
for pt in isotherm(5.0, 2.0, np.linspace(0.25, 2.5, 10)):
    print(f"{pt.rho:5.2f}  {pt.specific_volume:9.4f}  {pt.pressure:9.5f}  {pt.condensate_fraction:8.4f}")

print("\nbeta = 500, lambda = 5:")
for pt in condensate_curve(5.0, 500.0, [0.5, 1.0, 1.5]):
    print(f"  rho = {pt.rho:.1f}  mu = {pt.mu:8.4f}  condensate fraction = {pt.condensate_fraction:.4f}")

print(f"\ncritical beta at lambda = 5, rho = 0.5: {critical_beta(5.0, 0.5):.4f}")
lc = lambda_critical(1, 200.0)
print(f"critical lambda at unit density: {lc:.4f} (zero-temperature lobe tip {lobe_tip(1):.4f})")
