"""
Natural units and the feasibility numbers
=========================================

Quantities carry their energy dimension, so a time cannot be added to an
energy by accident.  The built-in transitions give the timescales and the
pump intensity a single pi pulse needs.
"""

from excitonlaser import nuclides, pump, units
from excitonlaser.cli import feasibility_summary

# parse, convert and print back
tau = units.parse_quantity("141 ns")
print("141 ns in natural units:", units.format_quantity(tau))
print("back in ns:", tau.to("ns"))
print("14.4 keV wavelength:", units.wavelength_of(units.parse_quantity("14.4 keV")).to("nm"), "nm")

try:
    units.parse_quantity("1 eV") + tau
except units.DimensionError as exc:
    print("mixing dimensions fails:", exc)

# one intensity in both systems
i = units.intensity_from_si(1e20)
print("1e20 W/cm2 =", i.value, "eV^4")

# the two tabulated nuclides at 1e6 pump wave-cycles
for label in nuclides.available_transitions():
    tr = nuclides.builtin_transition(label)
    need = pump.required_pump_intensity(tr, 10**6)
    print(f"{label}: pi pulse over 1e6 cycles needs {need.to('W/cm2'):.3e} W/cm2")

# the full summary for the baseline foil stack
for key, value in feasibility_summary(nuclides.baseline_scenario()).items():
    print(f"  {key:32s} {value}")
