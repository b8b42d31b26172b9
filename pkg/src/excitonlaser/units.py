"""Natural-unit bookkeeping (hbar = c = eps0 = 1, energies in eV).

Every dimensioned number is a power of energy: time and length are eV^-1,
intensities are eV^4.  Laboratory units only appear at the I/O boundary,
through :func:`parse_quantity` and :meth:`Quantity.to`.

All conversion constants live in this module and nowhere else.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from numbers import Real

import numpy as np

# CODATA 2018 (exact SI definitions where applicable)
HBAR_EV_S = 6.582119569e-16
ELEMENTARY_CHARGE_C = 1.602176634e-19
SPEED_OF_LIGHT_M_S = 299792458.0
FINE_STRUCTURE = 7.2973525693e-3
BOHR_RADIUS_M = 5.29177210903e-11

HBARC_EV_NM = HBAR_EV_S * SPEED_OF_LIGHT_M_S * 1e9
TWO_PI_HBARC_EV_NM = 2.0 * math.pi * HBARC_EV_NM
HBAR_J_S = HBAR_EV_S * ELEMENTARY_CHARGE_C

# (1 eV)^4 / (hbar^3 c^2) expressed in W/cm^2
_C_CM_S = SPEED_OF_LIGHT_M_S * 100.0
EV4_TO_W_PER_CM2 = ELEMENTARY_CHARGE_C / (HBAR_EV_S**3 * _C_CM_S**2)

# Heaviside-Lorentz elementary charge, dimensionless when eps0 = hbar = c = 1
ELEMENTARY_CHARGE_NATURAL = math.sqrt(4.0 * math.pi * FINE_STRUCTURE)

ENERGY = 1
TIME = -1
LENGTH = -1
INTENSITY = 4
DIMENSIONLESS = 0


class DimensionError(TypeError):
    """Operation mixes incompatible energy powers."""


class UnitError(ValueError):
    """Unknown unit string or malformed quantity literal."""


# unit -> (energy power, multiplier taking one unit to natural eV^power)
_UNITS: dict[str, tuple[int, float]] = {
    "eV": (ENERGY, 1.0),
    "meV": (ENERGY, 1e-3),
    "neV": (ENERGY, 1e-9),
    "keV": (ENERGY, 1e3),
    "MeV": (ENERGY, 1e6),
    "Hz": (ENERGY, 2.0 * math.pi * HBAR_EV_S),
    "rad/s": (ENERGY, HBAR_EV_S),
    "s": (TIME, 1.0 / HBAR_EV_S),
    "ms": (TIME, 1e-3 / HBAR_EV_S),
    "us": (TIME, 1e-6 / HBAR_EV_S),
    "ns": (TIME, 1e-9 / HBAR_EV_S),
    "ps": (TIME, 1e-12 / HBAR_EV_S),
    "fs": (TIME, 1e-15 / HBAR_EV_S),
    "m": (LENGTH, 1e9 / HBARC_EV_NM),
    "cm": (LENGTH, 1e7 / HBARC_EV_NM),
    "mm": (LENGTH, 1e6 / HBARC_EV_NM),
    "um": (LENGTH, 1e3 / HBARC_EV_NM),
    "nm": (LENGTH, 1.0 / HBARC_EV_NM),
    "pm": (LENGTH, 1e-3 / HBARC_EV_NM),
    "W/cm2": (INTENSITY, 1.0 / EV4_TO_W_PER_CM2),
    "1/eV": (-1, 1.0),
    "eV^-1": (-1, 1.0),
    "eV^4": (4, 1.0),
    "1": (DIMENSIONLESS, 1.0),
}
_ALIASES = {"µs": "us", "μs": "us", "µm": "um", "μm": "um", "W/cm^2": "W/cm2"}

_LITERAL = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S+)\s*$")


def _lookup(unit: str) -> tuple[int, float]:
    unit = _ALIASES.get(unit, unit)
    try:
        return _UNITS[unit]
    except KeyError:
        raise UnitError(f"unknown unit {unit!r}; known: {sorted(_UNITS)}") from None


@dataclass(frozen=True)
class Quantity:
    """A real value carrying an integer power of energy.

    >>> (Quantity(2.0, 1) * Quantity(3.0, -1)).dim
    0
    """

    value: float
    dim: int = 0

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)):
            raise TypeError("dim must be an integer power of energy")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "value", float(self.value))

    @classmethod
    def of(cls, value: float, unit: str) -> Quantity:
        dim, factor = _lookup(unit)
        return cls(value * factor, dim)

    def to(self, unit: str) -> float:
        dim, factor = _lookup(unit)
        if dim != self.dim:
            raise DimensionError(f"cannot express eV^{self.dim} in {unit!r} (eV^{dim})")
        return self.value / factor

    def require(self, dim: int, name: str = "quantity") -> float:
        if self.dim != dim:
            raise DimensionError(f"{name} must have dimension eV^{dim}, got eV^{self.dim}")
        return self.value

    def _coerce(self, other) -> Quantity:
        if isinstance(other, Quantity):
            return other
        if isinstance(other, Real):
            return Quantity(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.dim != self.dim:
            raise DimensionError(f"cannot add eV^{self.dim} and eV^{other.dim}")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value * other.value, self.dim + other.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value / other.value, self.dim - other.dim)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, power: int):
        if not isinstance(power, int):
            raise DimensionError("only integer powers keep the dimension integral")
        return Quantity(self.value**power, self.dim * power)

    def _compare_value(self, other) -> float:
        other = self._coerce(other)
        if other is NotImplemented or other.dim != self.dim:
            raise DimensionError("comparison of incompatible dimensions")
        return other.value

    def __lt__(self, other):
        return self.value < self._compare_value(other)

    def __le__(self, other):
        return self.value <= self._compare_value(other)

    def __gt__(self, other):
        return self.value > self._compare_value(other)

    def __ge__(self, other):
        return self.value >= self._compare_value(other)

    def __float__(self):
        if self.dim != 0:
            raise DimensionError(f"eV^{self.dim} quantity is not a plain number")
        return self.value

    def __str__(self):
        return f"{self.value:.6g} eV^{self.dim}" if self.dim else f"{self.value:.6g}"


def parse_quantity(text: str, dim: int | None = None) -> Quantity:
    """Parse a unit-suffixed literal such as ``"14.4 keV"`` or ``"0.1 um"``.

    Bare numbers are refused; the unit is mandatory.
    """
    if not isinstance(text, str):
        raise UnitError(f"expected a unit-suffixed string, got {text!r}")
    match = _LITERAL.match(text)
    if match is None:
        raise UnitError(f"cannot parse quantity {text!r} (expected e.g. '14.4 keV')")
    q = Quantity.of(float(match.group(1)), match.group(2))
    if dim is not None and q.dim != dim:
        raise DimensionError(f"{text!r} has dimension eV^{q.dim}, expected eV^{dim}")
    return q


def format_quantity(q: Quantity) -> str:
    """Lossless string form in natural units (inverse of :func:`parse_quantity`)."""
    unit = {ENERGY: "eV", TIME: "1/eV", INTENSITY: "eV^4", DIMENSIONLESS: "1"}.get(q.dim)
    if unit is None:
        raise UnitError(f"no canonical unit for eV^{q.dim}")
    return f"{q.value!r} {unit}"


def natural(x, dim: int, name: str = "argument"):
    """Strip a Quantity to its natural-unit value; raw numbers/arrays pass through."""
    if isinstance(x, Quantity):
        return x.require(dim, name)
    return np.asarray(x, dtype=float) if np.ndim(x) else float(x)


def energy(value: float, unit: str = "eV") -> Quantity:
    return Quantity(*_checked(value, unit, ENERGY))


def time(value: float, unit: str = "s") -> Quantity:
    return Quantity(*_checked(value, unit, TIME))


def length(value: float, unit: str = "nm") -> Quantity:
    return Quantity(*_checked(value, unit, LENGTH))


def _checked(value: float, unit: str, dim: int) -> tuple[float, int]:
    q = Quantity.of(value, unit)
    if q.dim != dim:
        raise DimensionError(f"unit {unit!r} is eV^{q.dim}, expected eV^{dim}")
    return q.value, q.dim


def energy_to_time(e: Quantity) -> Quantity:
    """hbar/E; ``.to("s")`` gives seconds."""
    value = e.require(ENERGY, "energy")
    if not value > 0:
        raise ValueError(f"energy must be positive, got {value}")
    return Quantity(1.0 / value, TIME)


def time_to_energy(t: Quantity) -> Quantity:
    value = t.require(TIME, "time")
    if not value > 0:
        raise ValueError(f"time must be positive, got {value}")
    return Quantity(1.0 / value, ENERGY)


def wavelength_of(e: Quantity) -> Quantity:
    """Vacuum wavelength 2*pi/omega; ``.to("nm")`` gives nanometres."""
    value = e.require(ENERGY, "energy")
    if not value > 0:
        raise ValueError(f"energy must be positive, got {value}")
    return Quantity(2.0 * math.pi / value, LENGTH)


def intensity_to_si(i) -> float:
    """Natural intensity (eV^4) to W/cm^2."""
    value = natural(i, INTENSITY, "intensity")
    if np.any(np.asarray(value) < 0):
        raise ValueError("intensity must be non-negative")
    return value * EV4_TO_W_PER_CM2


def intensity_from_si(w_per_cm2: float) -> Quantity:
    if w_per_cm2 < 0:
        raise ValueError("intensity must be non-negative")
    return Quantity(w_per_cm2 / EV4_TO_W_PER_CM2, INTENSITY)
