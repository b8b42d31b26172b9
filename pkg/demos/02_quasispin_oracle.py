"""
Collective operators for S nuclei
=================================

The ladder coefficients sqrt((S - s)(s + 1)) are checked against a brute
force sum of single-nucleus operators on the full 2**S space.
"""

import numpy as np

from excitonlaser import quasispin

for big_s in (1, 4, 8, 12):
    dense = quasispin.build_collective_operators(big_s)
    brute = quasispin.tensor_product_collective_operators(big_s)
    diff = np.max(np.abs(dense.sigma_plus - brute.sigma_plus))
    worst = max(quasispin.su2_residuals(dense).values())
    print(f"S={big_s:2d}  |dense - brute| = {diff:.1e}   SU(2) residual = {worst:.1e}")

# the first rung is sqrt(S): emission from one exciton is S times faster
big_s = 10**10
print("Sigma+ |0> amplitude / sqrt(S):", quasispin.raise_coefficient(big_s, 0) / np.sqrt(big_s))

# for s << S the exact ladder and the bosonic one agree
s = np.array([0, 10, 1000, 10**6])
ratio = quasispin.raise_coefficient(big_s, s) / quasispin.hp_raise_coefficient(big_s, s)
print("exact / Holstein-Primakoff:", ratio)
