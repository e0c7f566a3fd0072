"""The order-parameter rate function and the dual form of the pressure.

I(x) is the Legendre transform of p~(r); maximising x^2 - I(x) must give
back the same pressure as maximising -r^2 + p~(r).
"""
import numpy as np

from mfbh import ModelParams, duality_gap, rate_function, solve
from mfbh.legendre import growth_exponent

p = ModelParams(beta=1.0, mu=0.5, lam=0.05)
x = np.linspace(0.0, 3.0, 13)
table = rate_function(p, x)
print("    x       I(x)     argmax r")
for xi, Ii, ri in zip(table.x_grid, table.I_values, table.r_argmax):
    print(f"{xi:5.2f}  {Ii:9.5f}  {ri:9.5f}")

dual = max(xi * xi - Ii for xi, Ii in zip(x, table.I_values)) + table.p_tilde_zero
print(f"\ncoarse dual pressure {dual:.6f}, direct pressure {solve(p).pressure:.6f}")
print(f"refined duality gap {duality_gap(p):.2e}")

# p~ grows like r^(4/3) for large r
print(f"fitted growth exponent {growth_exponent(ModelParams(1.0, 0.0, 1.0), 20, 200, 8):.4f} (4/3 = 1.3333)")
