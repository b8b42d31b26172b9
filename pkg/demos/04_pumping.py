"""
Coherent versus incoherent pumping
==================================

Sub-pulses that keep their phase build the exciton amplitude, so the
population grows as j**2.  Random phases turn that into a random walk and
the population only grows as j.
"""

from excitonlaser import pump

big_s, g = 1e9, 1.42719e-6
area = 0.0316 / (g * 1000)

coh = pump.simulate_incoherent_pump(big_s, g, area, 1000, seed=20130101, ensemble=1000, coherent=True)
inc = pump.simulate_incoherent_pump(big_s, g, area, 1000, seed=20130101, ensemble=1000)

for j in (1, 10, 100, 1000):
    k = j - 1
    print(f"j={j:5d}  coherent {coh.mean_n[k]:.4e}  incoherent {inc.mean_n[k]:.4e} +/- {inc.stderr_n[k]:.1e}")

print(f"log-log slope: coherent {coh.slope(10):.3f}, incoherent {inc.slope(10):.3f}")
