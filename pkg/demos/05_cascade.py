"""
Fifty foils
===========

The pulse from the first foil empties the second, the sum of both empties
the third faster, and so on.  The averaged intensity grows roughly as n**1.5.
"""

from excitonlaser import cascade, nuclides
from excitonlaser.emission import Foil

sc = nuclides.baseline_scenario()
res = cascade.run_cascade(sc)

for n, r in res.normalized_averages()[::7]:
    tau = res.per_foil[n - 1].tau_st.value / res.tau_sp.value
    print(f"n={n:2d}  Ibar(n)/Ibar(2) = {r:8.3f}   tau_st/tau_sp = {tau:.5f}")

print(f"fit: exponent {res.fit_exponent:.4f}, r^2 {res.fit_r2:.5f}")

# the last foil is emptied by exactly a 180 degree rotation
g = Foil.inverted(sc.transition, sc.s_rest, sc.l_perp).g_tilde
print("pulse-area residual:", cascade.pulse_area_identity_check(res, g, sc.transition.omega))
