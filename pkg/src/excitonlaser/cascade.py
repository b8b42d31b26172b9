"""Multi-foil amplification: a half-filled first foil seeds stimulated
emission through N - 1 fully inverted foils.

All foils share the first foil's grid [0, t_max_factor * tau_sp] and the
pulse reaches each foil without delay.  Foil n empties at tau_st(n), found
from the total intensity leaving foil n - 1.  After that it re-absorbs;
the negative contribution is kept, and any negative total is clamped to
zero (and counted) before the next foil takes its square root.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import emission, units
from .emission import Foil, GridError, InsufficientDriveError, PulseSeries
from .nuclides import Scenario
from .units import INTENSITY, TIME, Quantity

log = logging.getLogger(__name__)

MIN_SAMPLES_PER_TAU = 8


class CascadeError(RuntimeError):
    pass


@dataclass(frozen=True)
class FoilStage:
    n: int
    tau_st: Quantity  # for n = 1: the averaging window tau_sp
    avg_intensity: Quantity
    clamp_events: int


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    amplitude: float
    r2: float


@dataclass
class CascadeResult:
    per_foil: list[FoilStage]
    i_total_final: PulseSeries
    fit: PowerLawFit | None
    tau_sp: Quantity
    last_drive: PulseSeries | None = None
    warnings: list[str] = field(default_factory=list)
    series: list[PulseSeries] | None = None

    @property
    def fit_exponent(self) -> float:
        return self.fit.exponent if self.fit else math.nan

    @property
    def fit_r2(self) -> float:
        return self.fit.r2 if self.fit else math.nan

    def normalized_averages(self) -> list[tuple[int, float]]:
        """(n, Ibar(n) / Ibar(2)) for n >= 2."""
        stages = [p for p in self.per_foil if p.n >= 2]
        if not stages:
            return []
        ref = stages[0].avg_intensity.value
        return [(p.n, p.avg_intensity.value / ref) for p in stages]

    def summary(self) -> dict:
        out = {
            "n_foils": len(self.per_foil),
            "tau_sp_s": self.tau_sp.to("s"),
            "per_foil": [
                {
                    "n": p.n,
                    "tau_st_s": p.tau_st.to("s"),
                    "tau_st_over_tau_sp": p.tau_st.value / self.tau_sp.value,
                    "avg_intensity_W_per_cm2": p.avg_intensity.to("W/cm2"),
                    "clamp_events": p.clamp_events,
                }
                for p in self.per_foil
            ],
            "fit": None,
            "warnings": list(self.warnings),
        }
        if self.fit is not None:
            out["fit"] = {
                "exponent": self.fit.exponent,
                "amplitude": self.fit.amplitude,
                "r2": self.fit.r2,
                "range": [2, len(self.per_foil)],
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def average_intensity(i_total: PulseSeries, tau_st) -> Quantity:
    """(1/tau) \\int_0^tau I dt by trapezoid quadrature."""
    tau = units.natural(tau_st, TIME, "tau_st")
    if not tau > 0:
        raise GridError("averaging window must be positive")
    if tau > i_total.t[-1] * (1 + 1e-12):
        raise GridError(f"averaging window {tau!r} extends beyond the grid end {i_total.t[-1]!r}")
    return Quantity(emission.integral_up_to(i_total.t, i_total.intensity, tau) / tau, INTENSITY)


def fit_power_law(points) -> PowerLawFit:
    """Least squares of ln(I) against ln(n); returns slope, e^intercept, r^2."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or len(pts) < 3:
        raise ValueError("need at least three (n, value) points")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit needs strictly positive data")
    lx, ly = np.log(x), np.log(y)
    res = stats.linregress(lx, ly)
    resid = ly - (res.intercept + res.slope * lx)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return PowerLawFit(float(res.slope), float(math.exp(res.intercept)), r2)


def run_cascade(scenario: Scenario, keep_series: bool = False) -> CascadeResult:
    tr = scenario.transition
    first = Foil.half_filled(tr, scenario.s_first, scenario.l_perp)
    tau_sp = emission.tau_spontaneous(first)
    t = emission.time_grid(scenario.t_max_factor * tau_sp.value, scenario.grid_points)
    dt = t[1] - t[0]

    notes = []
    # later foils must not decay on their own before the seed pulse is over
    single_photon_time = 1.0 / (first.gamma_coll * scenario.s_rest)
    if scenario.n_foils > 1 and not single_photon_time > tau_sp.value:
        notes.append(
            f"regime: 1/(gamma S_rest) = {single_photon_time * units.HBAR_EV_S:.3g} s is not longer "
            f"than tau_sp = {tau_sp.to('s'):.3g} s; later foils would decay spontaneously first"
        )

    total = emission.spontaneous_series(first, t)
    stages = [FoilStage(1, tau_sp, average_intensity(total, tau_sp), 0)]
    kept = [total] if keep_series else None
    drive = None

    for n in range(2, scenario.n_foils + 1):
        foil = Foil.inverted(tr, scenario.s_rest, scenario.l_perp)
        try:
            tau_st = emission.tau_stimulated(foil, total, foil_index=n)
        except InsufficientDriveError as exc:
            raise CascadeError(str(exc)) from exc
        if tau_st.value < MIN_SAMPLES_PER_TAU * dt:
            raise CascadeError(
                f"foil {n}: tau_st spans only {tau_st.value / dt:.1f} grid steps; "
                "increase grid_points for a converged result"
            )
        clamps = total.clamp_events
        drive = total
        total = total + emission.stimulated_intensity(foil, total)
        stages.append(FoilStage(n, tau_st, average_intensity(total, tau_st), clamps))
        if keep_series:
            kept.append(total)
        log.debug("foil %d: tau_st/tau_sp=%.6g", n, tau_st.value / tau_sp.value)

    fit = None
    if scenario.n_foils >= 4:
        fit = fit_power_law((p.n, p.avg_intensity.value) for p in stages if p.n >= 2)

    return CascadeResult(stages, total, fit, tau_sp, drive, notes, kept)


def pulse_area_identity_check(result: CascadeResult, g_tilde: float, omega) -> float:
    """|(2 g~/omega) \\int_0^{tau_st(N)} sqrt(I_total(N-1)) - pi| / pi."""
    if result.last_drive is None:
        raise CascadeError("identity needs a cascade with at least two foils")
    w = units.natural(omega, units.ENERGY, "omega")
    drive = result.last_drive
    tau = result.per_foil[-1].tau_st.value
    area = emission.integral_up_to(drive.t, drive.root, tau)
    return abs(2.0 * g_tilde / w * area - math.pi) / math.pi
