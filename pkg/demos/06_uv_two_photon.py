"""
Two-photon pumping in the UV
============================

Two optical beams, detuned from an intermediate level, drive a UV
transition.  With atomic-size dipoles the required intensities come out
near 1e10 W/cm2, an order-of-magnitude estimate only.
"""

from excitonlaser import pump, units

scheme = pump.TwoPhotonScheme.from_dipole_length(
    units.energy(3.0, "eV"),
    units.energy(3.0, "eV"),
    units.parse_quantity("1e13 Hz"),
    units.length(3 * units.BOHR_RADIUS_M, "m"),
)
req = pump.two_photon_pump_requirement(scheme, 10**4)
print(f"pulse length {req.tau_pump.to('ps'):.1f} ps")
print(f"beam 1: {req.intensity1.to('W/cm2'):.3e} W/cm2")
print(f"beam 2: {req.intensity2.to('W/cm2'):.3e} W/cm2")
print(f"geometric mean: {req.geometric_mean.to('W/cm2'):.3e} W/cm2")
