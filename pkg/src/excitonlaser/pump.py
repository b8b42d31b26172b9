"""Pump-side physics: coupling, pi-pulse preparation, required intensity,
coherent vs. incoherent pumping, and a two-photon UV pumping estimate.

Random numbers
--------------
:func:`simulate_incoherent_pump` draws phases from numpy's PCG64 bit
generator.  Ensemble member ``m`` uses its own substream
``SeedSequence(seed).spawn(ensemble)[m]``, so results do not depend on how
members are batched or parallelised.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import units
from .nuclides import Transition
from .units import ENERGY, INTENSITY, LENGTH, TIME, Quantity

_CROSSCHECK_RTOL = 1e-10
ADIABATIC_MARGIN = 10.0


class RegimeWarning(UserWarning):
    pass


class RegimeError(ValueError):
    pass


def coupling_from_linewidth(transition: Transition) -> float:
    """Dimensionless coupling g~ = sqrt(2 pi Gamma_single / omega)."""
    gamma = transition.gamma_single.value
    w = transition.omega.value
    return math.sqrt(2.0 * math.pi * gamma / w)


def pi_pulse_area(g_tilde: float) -> float:
    """\\int A dt that rotates the quasispin by 180 degrees: pi / (2 g~)."""
    if not g_tilde > 0:
        raise ValueError("g_tilde must be positive")
    return math.pi / (2.0 * g_tilde)


@dataclass(frozen=True)
class PumpPulse:
    """Classical pump field A(t) (energy units) lasting ``duration``.

    ``amplitude`` is either a scalar (constant pulse) or samples on
    ``t_samples``.
    """

    amplitude: float | np.ndarray
    duration: float
    n_wavecycles: float | None = None
    t_samples: np.ndarray | None = None

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if np.any(np.asarray(self.amplitude) < 0):
            raise ValueError("amplitude must be non-negative")
        if np.ndim(self.amplitude) and self.t_samples is None:
            raise ValueError("sampled amplitudes need t_samples")

    @classmethod
    def constant(cls, intensity, omega, n_wavecycles: float) -> PumpPulse:
        """Constant-intensity pulse of 𝔑 coherent cycles: A = sqrt(I)/omega,
        duration 2 pi 𝔑 / omega."""
        i = units.natural(intensity, INTENSITY, "intensity")
        w = units.natural(omega, ENERGY, "omega")
        return cls(math.sqrt(i) / w, 2.0 * math.pi * n_wavecycles / w, n_wavecycles)

    @classmethod
    def sampled(cls, t, amplitude) -> PumpPulse:
        t = np.asarray(units.natural(t, TIME, "t"), dtype=float)
        return cls(np.asarray(amplitude, dtype=float), float(t[-1]), None, t)

    @property
    def is_constant(self) -> bool:
        return np.ndim(self.amplitude) == 0

    def area(self, t):
        """\\int_0^t A(tau) d tau."""
        t = units.natural(t, TIME, "t")
        if np.any(np.asarray(t) < 0) or np.any(np.asarray(t) > self.duration):
            raise ValueError(f"t outside the pulse [0, {self.duration!r}]")
        if self.is_constant:
            return self.amplitude * t
        cum = cumulative_trapezoid(self.amplitude, self.t_samples, initial=0.0)
        return np.interp(t, self.t_samples, cum)

    @property
    def total_area(self) -> float:
        return float(self.area(self.duration))


def pump_population(big_s: float, g_tilde: float, pulse: PumpPulse, t):
    """Excitons s(t) = (S/2)[1 - cos(2 g~ \\int A)] during a coherent pump."""
    a = pulse.area(t)
    # 1 - cos(2x) = 2 sin^2(x), accurate at small area
    s = big_s * np.sin(g_tilde * a) ** 2
    return float(s) if np.ndim(s) == 0 else s


def constant_pulse_intensity(omega, g_tilde: float, tau_pump) -> Quantity:
    """Intensity of a constant pi pulse of length tau: pi^2 omega^2 / (4 g~^2 tau^2)."""
    w = units.natural(omega, ENERGY, "omega")
    tau = units.natural(tau_pump, TIME, "tau_pump")
    return Quantity(math.pi**2 * w**2 / (4.0 * g_tilde**2 * tau**2), INTENSITY)


def required_pump_intensity(transition: Transition, n_wavecycles: float) -> Quantity:
    """Pump intensity omega^5 / (32 pi 𝔑^2 Gamma_single) for a pi pulse of 𝔑 cycles."""
    if n_wavecycles < 1:
        raise ValueError("n_wavecycles must be >= 1")
    w = transition.omega.value
    gamma = transition.gamma_single.value
    direct = w**5 / (32.0 * math.pi * n_wavecycles**2 * gamma)
    via_pulse = constant_pulse_intensity(
        w, coupling_from_linewidth(transition), 2.0 * math.pi * n_wavecycles / w
    ).value
    if abs(direct - via_pulse) > _CROSSCHECK_RTOL * direct:
        raise ArithmeticError(
            f"pump intensity routes disagree: {direct!r} vs {via_pulse!r} eV^4"
        )
    return Quantity(direct, INTENSITY)


# -- coherent vs incoherent pumping (Holstein-Primakoff regime) -------------


@dataclass(frozen=True)
class GrowthCurve:
    j: np.ndarray
    mean_n: np.ndarray
    stderr_n: np.ndarray
    coherent: bool

    def slope(self, j_min: int = 10, j_max: int | None = None) -> float:
        from .cascade import fit_power_law

        mask = self.j >= j_min
        if j_max is not None:
            mask &= self.j <= j_max
        return fit_power_law(list(zip(self.j[mask], self.mean_n[mask]))).exponent

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["j", "mean_n", "stderr_n"])
            for j, m, e in zip(self.j, self.mean_n, self.stderr_n):
                out.writerow([int(j), f"{m:.17g}", f"{e:.17g}"])


def simulate_incoherent_pump(
    big_s: float,
    g_tilde: float,
    sub_pulse_area: float,
    n_subpulses: int,
    seed: int,
    ensemble: int,
    coherent: bool = False,
) -> GrowthCurve:
    """Exciton number after j = 1..n_subpulses uncorrelated coherent sub-pulses.

    Each sub-pulse displaces the exciton amplitude by |beta| = g~ sqrt(S) a
    with an independent uniform phase; ``coherent=True`` sets every phase
    to zero (a single coherent pulse chopped into pieces).
    """
    if n_subpulses < 1 or ensemble < 1:
        raise ValueError("n_subpulses and ensemble must be >= 1")
    beta = abs(complex(-1j * g_tilde * math.sqrt(big_s) * sub_pulse_area))
    expected = beta**2 * (n_subpulses**2 if coherent else n_subpulses)
    if expected > big_s / 10:
        warnings.warn(
            f"expected exciton number {expected:.3g} exceeds S/10; "
            "the bosonic (s << S) approximation is leaving its range",
            RegimeWarning,
            stacklevel=2,
        )
    j = np.arange(1, n_subpulses + 1)
    if coherent:
        n = (beta * j) ** 2
        return GrowthCurve(j, n.astype(float), np.zeros(n_subpulses), True)

    children = np.random.SeedSequence(seed).spawn(ensemble)
    samples = np.empty((ensemble, n_subpulses))
    for m, child in enumerate(children):
        phases = np.random.Generator(np.random.PCG64(child)).uniform(0.0, 2.0 * math.pi, n_subpulses)
        walk = np.cumsum(np.exp(1j * phases))
        samples[m] = beta**2 * (walk.real**2 + walk.imag**2)
    mean = samples.mean(axis=0)
    if ensemble > 1:
        err = samples.std(axis=0, ddof=1) / math.sqrt(ensemble)
    else:
        err = np.full(n_subpulses, np.inf)
    return GrowthCurve(j, mean, err, False)


# -- two-photon UV pumping --------------------------------------------------


@dataclass(frozen=True)
class TwoPhotonScheme:
    """Detuned two-photon drive 2 -> (3) -> 4 with photons omega1 + omega2.

    Couplings are dimensionless in the same convention as the one-photon g~
    (the Rabi energy of a beam of intensity I is g~ sqrt(I) / omega).
    """

    g23: float
    g34: float
    omega1: float
    omega2: float
    detuning: float
    omega_uv: float | None = None

    def __post_init__(self):
        total = self.omega1 + self.omega2
        if self.omega_uv is None:
            object.__setattr__(self, "omega_uv", total)
        elif self.omega_uv != total:
            raise ValueError("two-photon resonance requires omega_uv == omega1 + omega2")
        if self.detuning == 0:
            raise ValueError("detuning must be non-zero")

    @classmethod
    def from_dipole_length(cls, omega1, omega2, detuning, dipole_length) -> TwoPhotonScheme:
        """Couplings from a dipole length d (e.g. three Bohr radii).

        The 3-4 step is an allowed dipole transition (Rabi energy e d E); the
        2-3 step is dipole-forbidden and carries an extra quadrupole factor
        omega1 d.
        """
        w1 = units.natural(omega1, ENERGY, "omega1")
        w2 = units.natural(omega2, ENERGY, "omega2")
        delta = units.natural(detuning, ENERGY, "detuning")
        d = units.natural(dipole_length, LENGTH, "dipole_length")
        ed = units.ELEMENTARY_CHARGE_NATURAL * d
        return cls(g23=ed * w1 * (w1 * d), g34=ed * w2, omega1=w1, omega2=w2, detuning=delta)

    def rabi_23(self, a1: float) -> float:
        return self.g23 * a1

    def rabi_34(self, a2: float) -> float:
        return self.g34 * a2


def two_photon_effective_rabi(scheme: TwoPhotonScheme, a1, a2) -> Quantity:
    """Effective one-photon drive g~23 A1 g~34 A2 / Delta (adiabatic elimination)."""
    a1 = units.natural(a1, ENERGY, "a1")
    a2 = units.natural(a2, ENERGY, "a2")
    delta = abs(scheme.detuning)
    for name, rabi in (("g23*A1", scheme.rabi_23(a1)), ("g34*A2", scheme.rabi_34(a2))):
        if ADIABATIC_MARGIN * abs(rabi) > delta:
            raise RegimeError(
                f"{name} = {abs(rabi):.3g} eV is not {ADIABATIC_MARGIN:g}x below the detuning {delta:.3g} eV"
            )
    return Quantity(scheme.g23 * a1 * scheme.g34 * a2 / scheme.detuning, ENERGY)


@dataclass(frozen=True)
class TwoPhotonRequirement:
    intensity1: Quantity
    intensity2: Quantity
    tau_pump: Quantity
    effective_rabi: Quantity

    @property
    def geometric_mean(self) -> Quantity:
        return Quantity(math.sqrt(self.intensity1.value * self.intensity2.value), INTENSITY)


def two_photon_pump_requirement(scheme: TwoPhotonScheme, n_wavecycles: float) -> TwoPhotonRequirement:
    """Beam intensities for a two-photon pi pulse lasting 𝔑 cycles of omega1.

    Equal intensities are used when both one-photon couplings stay below the
    detuning margin; otherwise the strongly coupled beam is capped at the
    margin and the other beam carries the rest of the product I1*I2.
    """
    w1, w2, delta = scheme.omega1, scheme.omega2, abs(scheme.detuning)
    tau = 2.0 * math.pi * n_wavecycles / w1
    # g23 g34 sqrt(I1 I2) / (w1 w2 delta) * tau = pi/2
    product_root = math.pi * w1 * w2 * delta / (2.0 * scheme.g23 * scheme.g34 * tau)
    i1 = i2 = product_root
    cap2 = (delta / ADIABATIC_MARGIN * w2 / scheme.g34) ** 2
    cap1 = (delta / ADIABATIC_MARGIN * w1 / scheme.g23) ** 2
    if i2 > cap2:
        i2 = cap2 * (1 - 1e-9)
        i1 = product_root**2 / i2
    elif i1 > cap1:
        i1 = cap1 * (1 - 1e-9)
        i2 = product_root**2 / i1
    rabi = two_photon_effective_rabi(scheme, math.sqrt(i1) / w1, math.sqrt(i2) / w2)
    return TwoPhotonRequirement(
        Quantity(i1, INTENSITY), Quantity(i2, INTENSITY), Quantity(tau, TIME), rabi
    )
