"""
Superradiant and stimulated emission from one foil
==================================================

A half-filled foil radiates a sech^2 pulse.  A fully inverted foil placed
behind it is emptied once the incoming pulse has rotated it by pi.
"""

import numpy as np

from excitonlaser import emission, nuclides
from excitonlaser.emission import Foil

sc = nuclides.baseline_scenario()
first = Foil.half_filled(sc.transition, sc.s_first, sc.l_perp)
second = Foil.inverted(sc.transition, sc.s_rest, sc.l_perp)

tau_sp = emission.tau_spontaneous(first)
print(f"tau_sp = {tau_sp.to('ns'):.4f} ns, single nucleus {sc.transition.tau_single.to('ns'):.1f} ns")

t = emission.time_grid(sc.t_max_factor * tau_sp.value, sc.grid_points)
drive = emission.spontaneous_series(first, t)

# the closed-form population against a direct ODE solve
s_ode = emission.integrate_population_ode(first, first.s0, t)
s_closed = emission.spontaneous_population(first, t)
print("ODE vs closed form, max |ds|/S:", np.max(np.abs(s_ode - s_closed)) / first.big_s)

# stimulated emission of the second foil
tau_st = emission.tau_stimulated(second, drive)
print(f"tau_st / tau_sp = {tau_st.value / tau_sp.value:.6f}")
print(f"closed form     = {emission.tau_stimulated_closed_form():.6f}")

out = emission.stimulated_intensity(second, drive)
stored = emission.stored_energy(second, emission.stimulated_phase(second, drive))
emitted = emission.emitted_energy(out, sc.l_perp)
budget = second.big_s * second.omega
print("energy budget error:", np.max(np.abs(stored + emitted - budget)) / budget)
print("re-absorbs after the pi rotation:", out.reabsorbing)
