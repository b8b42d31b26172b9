"""Collective spontaneous and stimulated emission from a single foil.

Times are natural (eV^-1) unless a :class:`~excitonlaser.units.Quantity` is
passed; intensities are eV^4.  Closed forms cover the half-filled foil
(s0 = S/2); the population ODE handles any other starting point.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid, solve_ivp
from scipy.optimize import bisect

from . import units
from .nuclides import Transition
from .units import ENERGY, INTENSITY, LENGTH, TIME, Quantity

ODE_RTOL = 1e-9
TAU_RTOL = 1e-10
_GRID_RTOL = 1e-9


class ContractError(ValueError):
    pass


class IntegrationError(RuntimeError):
    pass


class GridError(ValueError):
    pass


class InsufficientDriveError(RuntimeError):
    """The drive never accumulates the area needed to empty the foil."""

    def __init__(self, attained_fraction: float, foil_index: int | None = None):
        self.attained_fraction = attained_fraction
        self.foil_index = foil_index
        where = f"foil {foil_index}: " if foil_index is not None else ""
        super().__init__(
            f"{where}insufficient drive, pulse area reaches only "
            f"{attained_fraction:.6g} of the pi rotation within the grid"
        )


@dataclass(frozen=True)
class Foil:
    """A coherently prepared ensemble of ``big_s`` nuclei with ``s0`` excitations."""

    transition: Transition
    big_s: float
    s0: float
    l_perp: Quantity
    gamma_coll: float = field(init=False)
    g_tilde: float = field(init=False)

    def __post_init__(self):
        if not self.big_s >= 1:
            raise ValueError("big_s must be >= 1")
        if not 0 <= self.s0 <= self.big_s:
            raise ValueError("need 0 <= s0 <= S")
        lp = self.l_perp.require(LENGTH, "l_perp")
        w = self.transition.omega.value
        gamma = self.transition.gamma_single.value
        object.__setattr__(self, "gamma_coll", gamma / (4.0 * w**2 * lp**2))
        object.__setattr__(self, "g_tilde", math.sqrt(2.0 * math.pi * gamma / w))

    @classmethod
    def half_filled(cls, transition, big_s, l_perp) -> Foil:
        return cls(transition, big_s, big_s / 2, l_perp)

    @classmethod
    def inverted(cls, transition, big_s, l_perp) -> Foil:
        return cls(transition, big_s, big_s, l_perp)

    @property
    def omega(self) -> float:
        return self.transition.omega.value

    @property
    def area(self) -> float:
        """Cross-section L_perp^2 in eV^-2."""
        return self.l_perp.value**2


def time_grid(t_max, n: int) -> np.ndarray:
    t_max = units.natural(t_max, TIME, "t_max")
    if n < 2 or not t_max > 0:
        raise GridError("need at least two samples on a positive interval")
    return np.linspace(0.0, t_max, n)


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PulseSeries:
    """Intensity samples on a uniform time grid starting at t = 0.

    Negative samples (re-absorption) are kept; :attr:`root` clamps them to
    zero and :attr:`clamp_events` counts how many were clamped.
    """

    t: np.ndarray
    intensity: np.ndarray
    reabsorbing: bool = False

    def __post_init__(self):
        t, i = _readonly(self.t), _readonly(self.intensity)
        if t.ndim != 1 or t.shape != i.shape or len(t) < 2:
            raise GridError("t and intensity must be 1-d arrays of equal length >= 2")
        steps = np.diff(t)
        h = (t[-1] - t[0]) / (len(t) - 1)
        if not h > 0 or np.max(np.abs(steps - h)) > _GRID_RTOL * h:
            raise GridError("time grid must be uniform and increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "intensity", i)

    @property
    def dt(self) -> float:
        return (self.t[-1] - self.t[0]) / (len(self.t) - 1)

    @property
    def root(self) -> np.ndarray:
        return np.sqrt(np.clip(self.intensity, 0.0, None))

    @property
    def clamp_events(self) -> int:
        return int(np.count_nonzero(self.intensity < 0))

    @property
    def cumulative_root(self) -> np.ndarray:
        """Running trapezoid integral of sqrt(I) (units eV)."""
        return cumulative_trapezoid(self.root, dx=self.dt, initial=0.0)

    def root_area_error(self) -> float:
        """Richardson estimate of the trapezoid error in the total sqrt(I) area."""
        r = self.root
        n = len(r) - 1 if (len(r) - 1) % 2 == 0 else len(r) - 2
        fine = np.trapezoid(r[: n + 1], dx=self.dt)
        coarse = np.trapezoid(r[: n + 1 : 2], dx=2 * self.dt)
        return abs(fine - coarse) / 3.0

    def field_amplitude(self, omega) -> np.ndarray:
        return self.root / units.natural(omega, ENERGY, "omega")

    def same_grid(self, other: PulseSeries) -> bool:
        return self.t.shape == other.t.shape and np.array_equal(self.t, other.t)

    def __add__(self, other: PulseSeries) -> PulseSeries:
        if not isinstance(other, PulseSeries):
            return NotImplemented
        if not self.same_grid(other):
            raise GridError("cannot add pulse series sampled on different grids")
        return PulseSeries(
            self.t, self.intensity + other.intensity, self.reabsorbing or other.reabsorbing
        )

    def to_csv(self, path) -> None:
        write_series_csv(self, path)

    @classmethod
    def from_csv(cls, path) -> PulseSeries:
        return read_series_csv(path)


def write_series_csv(series: PulseSeries, path) -> None:
    t_s = series.t * units.HBAR_EV_S
    w_cm2 = series.intensity * units.EV4_TO_W_PER_CM2
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["t_s", "intensity_W_per_cm2"])
        for a, b in zip(t_s, w_cm2):
            out.writerow([f"{a:.17g}", f"{b:.17g}"])


def read_series_csv(path) -> PulseSeries:
    data = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
    return PulseSeries(data[:, 0] / units.HBAR_EV_S, data[:, 1] / units.EV4_TO_W_PER_CM2)


def integral_up_to(t: np.ndarray, y: np.ndarray, upper: float, cumulative=None) -> float:
    """Trapezoid integral of linearly interpolated samples from t[0] to ``upper``."""
    h = t[1] - t[0]
    if upper < t[0] or upper > t[-1] * (1 + 1e-12):
        raise GridError(f"upper limit {upper!r} outside grid [{t[0]!r}, {t[-1]!r}]")
    if cumulative is None:
        cumulative = cumulative_trapezoid(y, dx=h, initial=0.0)
    k = min(int((upper - t[0]) // h), len(t) - 2)
    u = upper - t[k]
    return float(cumulative[k] + y[k] * u + (y[k + 1] - y[k]) * u * u / (2.0 * h))


# -- spontaneous emission --------------------------------------------------


def spontaneous_rate(foil: Foil, s) -> Quantity:
    """Gamma_sp = gamma (S - s + 1) s, as an energy (rate)."""
    if not 0 <= s <= foil.big_s:
        raise ValueError(f"s={s} outside [0, {foil.big_s}]")
    return Quantity(foil.gamma_coll * (foil.big_s - s + 1.0) * s, ENERGY)


def _require_half_filled(foil: Foil):
    if foil.s0 != foil.big_s / 2:
        raise ContractError(
            "closed form needs s0 = S/2; use integrate_population_ode for other initial states"
        )


def spontaneous_population(foil: Foil, t):
    """s(t) = S / (1 + exp(gamma S t)) for a half-filled foil."""
    _require_half_filled(foil)
    x = foil.gamma_coll * foil.big_s * units.natural(t, TIME, "t")
    # S * expit(-x) without overflow
    s = foil.big_s * np.exp(-np.logaddexp(0.0, x))
    return float(s) if np.ndim(s) == 0 else s


def _sech2(x):
    x = np.abs(x)
    e = np.exp(-2.0 * x)
    return 4.0 * e / (1.0 + e) ** 2


def spontaneous_intensity(foil: Foil, t):
    """I_sp(t) = (gamma S^2 / 4) sech^2(gamma S t / 2) omega / L^2."""
    _require_half_filled(foil)
    gs = foil.gamma_coll * foil.big_s
    x = 0.5 * gs * units.natural(t, TIME, "t")
    i = 0.25 * gs * foil.big_s * _sech2(x) * foil.omega / foil.area
    return float(i) if np.ndim(i) == 0 else i


def spontaneous_series(foil: Foil, t_grid) -> PulseSeries:
    return PulseSeries(t_grid, spontaneous_intensity(foil, t_grid))


def tau_spontaneous(foil: Foil) -> Quantity:
    return Quantity(4.0 / (foil.gamma_coll * foil.big_s), TIME)


def coherence_advantage(big_s: float, l_perp: Quantity, wavelength: Quantity) -> float:
    """tau_sp / tau_single = 64 pi^2 L^2 / (lambda^2 S)."""
    lp = l_perp.require(LENGTH, "l_perp")
    lam = wavelength.require(LENGTH, "wavelength")
    if not (big_s > 0 and lp > 0 and lam > 0):
        raise ValueError("S, L_perp and wavelength must be positive")
    return 64.0 * math.pi**2 * lp**2 / (lam**2 * big_s)


def integrate_population_ode(foil: Foil, s0: float, t_grid) -> np.ndarray:
    """Integrate ds/dt = -gamma (S - s + 1) s from s(0) = s0 on ``t_grid``.

    Solved in scaled variables x = s/S, tau = gamma S t with DOP853.
    """
    big_s = foil.big_s
    if not 0 <= s0 <= big_s:
        raise ValueError(f"s0={s0} outside [0, {big_s}]")
    t = np.asarray(units.natural(t_grid, TIME, "t_grid"), dtype=float)
    scale = foil.gamma_coll * big_s
    tau = t * scale
    eps = 1.0 / big_s

    def rhs(_, x):
        return -(1.0 - x + eps) * x

    sol = solve_ivp(
        rhs,
        (float(tau[0]), float(tau[-1])),
        [s0 / big_s],
        method="DOP853",
        t_eval=tau,
        rtol=ODE_RTOL,
        atol=1e-16,
    )
    if not sol.success:
        reached = sol.t[-1] / scale if sol.t.size else t[0]
        raise IntegrationError(
            f"population ODE failed at t={reached:.6g} eV^-1 after {sol.nfev} evaluations: {sol.message}"
        )
    return np.clip(sol.y[0] * big_s, 0.0, big_s)


# -- stimulated emission ---------------------------------------------------


def stimulated_phase(foil: Foil, incoming: PulseSeries) -> np.ndarray:
    """Rotation angle Phi(t) = (2 g~/omega) \\int_0^t sqrt(I_in)."""
    return (2.0 * foil.g_tilde / foil.omega) * incoming.cumulative_root


def stimulated_intensity(foil: Foil, incoming: PulseSeries) -> PulseSeries:
    """Emission of a fully inverted foil driven by ``incoming``.

    Samples beyond the pi rotation are negative (re-absorption); the returned
    series keeps them and sets ``reabsorbing``.
    """
    if foil.s0 != foil.big_s:
        raise ContractError("stimulated emission assumes a fully inverted foil (s0 = S)")
    if not isinstance(incoming, PulseSeries):
        raise GridError("incoming drive must be a PulseSeries")
    phase = stimulated_phase(foil, incoming)
    i_st = (foil.g_tilde * foil.big_s / foil.area) * np.sin(phase) * incoming.root
    return PulseSeries(incoming.t, i_st, reabsorbing=bool(np.any(phase > math.pi)))


def pi_root_area(foil: Foil) -> float:
    """Drive area \\int sqrt(I) needed to empty the foil: pi omega / (2 g~)."""
    return math.pi * foil.omega / (2.0 * foil.g_tilde)


def tau_stimulated(foil: Foil, incoming: PulseSeries, foil_index: int | None = None) -> Quantity:
    """First time at which the drive completes a pi rotation of the foil."""
    target = pi_root_area(foil)
    t = incoming.t
    r = incoming.root
    cum = cumulative_trapezoid(r, dx=incoming.dt, initial=0.0)
    if cum[-1] < target:
        raise InsufficientDriveError(cum[-1] / target, foil_index)
    k = int(np.searchsorted(cum, target, side="left"))
    lo, hi = t[k - 1], t[k]

    def excess(x):
        return integral_up_to(t, r, x, cum) - target

    if excess(hi) == 0.0:
        return Quantity(hi, TIME)
    root = bisect(excess, lo, hi, xtol=TAU_RTOL * hi * 1e-2, rtol=TAU_RTOL)
    return Quantity(root, TIME)


def tau_stimulated_closed_form() -> float:
    """tau_st / tau_sp for the two-foil case: artanh(tan(sqrt(pi/2) / 8))."""
    return math.atanh(math.tan(math.sqrt(math.pi / 2.0) / 8.0))


def stored_energy(foil: Foil, phase) -> np.ndarray:
    """Energy left in an initially inverted foil after rotation ``phase``."""
    return 0.5 * foil.big_s * foil.omega * (np.cos(phase) + 1.0)


def emitted_energy(series: PulseSeries, l_perp: Quantity) -> np.ndarray:
    """Running \\int I L^2 dt (eV), Richardson-extrapolated trapezoid (Simpson)."""
    lp = l_perp.require(LENGTH, "l_perp")
    return cumulative_simpson(series.intensity * lp**2, dx=series.dt, initial=0.0)
