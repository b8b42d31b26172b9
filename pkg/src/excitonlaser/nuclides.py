"""Transition catalog and scenario configuration.

Scenarios are JSON documents in which every dimensioned value is a
unit-suffixed string::

    {
      "transition": "Fe57",
      "n_foils": 50,
      "s_first": 1e10,
      "s_rest": 1e9,
      "l_perp": "0.1 um",
      "n_wavecycles": 1000000
    }

``transition`` is either a built-in label or an object with ``label``,
``omega`` and at least one of ``lifetime`` / ``gamma_single``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from . import units
from .units import ENERGY, LENGTH, TIME, Quantity

DEFAULT_GRID_POINTS = 16384
DEFAULT_T_MAX_FACTOR = 10.0
DEFAULT_N_WAVECYCLES = 10**6

_CONSISTENCY_RTOL = 1e-9


class UnknownTransitionError(KeyError):
    def __str__(self):
        return self.args[0]


class ScenarioError(ValueError):
    """Invalid scenario document; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


@dataclass(frozen=True)
class Transition:
    """Two-level resonance: energy ``omega`` and natural width ``gamma_single``.

    ``lifetime`` duplicates ``1/gamma_single`` and is checked against it.
    """

    label: str
    omega: Quantity
    gamma_single: Quantity
    lifetime: Quantity

    def __post_init__(self):
        w = self.omega.require(ENERGY, "omega")
        g = self.gamma_single.require(ENERGY, "gamma_single")
        tau = self.lifetime.require(TIME, "lifetime")
        if not (w > 0 and tau > 0 and g > 0):
            raise ValueError(f"{self.label}: omega, lifetime and width must be positive")
        if abs(g * tau - 1.0) > _CONSISTENCY_RTOL:
            raise ValueError(
                f"{self.label}: gamma_single*lifetime = {g * tau!r} hbar, inconsistent"
            )

    @classmethod
    def from_lifetime(cls, label: str, omega: Quantity, lifetime: Quantity) -> Transition:
        return cls(label, omega, units.time_to_energy(lifetime), lifetime)

    @classmethod
    def from_width(cls, label: str, omega: Quantity, gamma_single: Quantity) -> Transition:
        return cls(label, omega, gamma_single, units.energy_to_time(gamma_single))

    @property
    def tau_single(self) -> Quantity:
        """Single-nucleus decay time 1/Gamma_single."""
        return units.energy_to_time(self.gamma_single)

    @property
    def wavelength(self) -> Quantity:
        return units.wavelength_of(self.omega)


_BUILTIN = {
    "Fe57": ("14.4 keV", "141 ns"),
    "Hg201": ("1.6 keV", "81 ns"),
}


def available_transitions() -> list[str]:
    return sorted(_BUILTIN)


def builtin_transition(label: str) -> Transition:
    try:
        omega, lifetime = _BUILTIN[label]
    except KeyError:
        raise UnknownTransitionError(
            f"unknown transition {label!r}; available: {', '.join(available_transitions())}"
        ) from None
    return Transition.from_lifetime(
        label, units.parse_quantity(omega, ENERGY), units.parse_quantity(lifetime, TIME)
    )


@dataclass(frozen=True)
class Scenario:
    transition: Transition
    n_foils: int
    s_first: float
    s_rest: float
    l_perp: Quantity
    grid_points: int = DEFAULT_GRID_POINTS
    t_max_factor: float = DEFAULT_T_MAX_FACTOR
    n_wavecycles: int = DEFAULT_N_WAVECYCLES
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n_foils < 1:
            raise ScenarioError("must be >= 1", "n_foils")
        if not self.s_first >= 1:
            raise ScenarioError("must be >= 1", "s_first")
        if not self.s_rest >= 1:
            raise ScenarioError("must be >= 1", "s_rest")
        try:
            lp = self.l_perp.require(LENGTH, "l_perp")
        except units.DimensionError as exc:
            raise ScenarioError(str(exc), "l_perp") from None
        if not lp > 0:
            raise ScenarioError("must be positive", "l_perp")
        if self.grid_points < 16:
            raise ScenarioError("must be >= 16", "grid_points")
        if not (self.t_max_factor > 0 and math.isfinite(self.t_max_factor)):
            raise ScenarioError("must be a positive finite number", "t_max_factor")
        if self.n_wavecycles < 1:
            raise ScenarioError("must be >= 1", "n_wavecycles")

    def replace(self, **changes) -> Scenario:
        return replace(self, **changes)


def baseline_scenario() -> Scenario:
    """The 50-foil 57Fe configuration used for the power-law figure."""
    return Scenario(
        transition=builtin_transition("Fe57"),
        n_foils=50,
        s_first=1e10,
        s_rest=1e9,
        l_perp=units.length(0.1, "um"),
        name="fe57_baseline",
    )


def _count(doc: dict, key: str, default=None, integral: bool = True):
    if key not in doc:
        if default is None:
            raise ScenarioError("missing required field", key)
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"expected a number, got {value!r}", key)
    if integral:
        if not float(value).is_integer():
            raise ScenarioError(f"expected an integer, got {value!r}", key)
        return int(value)
    return float(value)


def _quantity(doc: dict, key: str, dim: int, where: str = "") -> Quantity:
    name = f"{where}{key}"
    if key not in doc:
        raise ScenarioError("missing required field", name)
    try:
        return units.parse_quantity(doc[key], dim)
    except (units.UnitError, units.DimensionError) as exc:
        raise ScenarioError(str(exc), name) from None


def _transition_from_doc(doc) -> Transition:
    if isinstance(doc, str):
        try:
            return builtin_transition(doc)
        except UnknownTransitionError as exc:
            raise ScenarioError(str(exc), "transition") from None
    if not isinstance(doc, dict):
        raise ScenarioError("expected a label or an object", "transition")
    label = doc.get("label", "custom")
    omega = _quantity(doc, "omega", ENERGY, "transition.")
    has_tau, has_gamma = "lifetime" in doc, "gamma_single" in doc
    if not (has_tau or has_gamma):
        raise ScenarioError("give lifetime or gamma_single", "transition")
    try:
        if has_tau and has_gamma:
            return Transition(
                label,
                omega,
                _quantity(doc, "gamma_single", ENERGY, "transition."),
                _quantity(doc, "lifetime", TIME, "transition."),
            )
        if has_tau:
            return Transition.from_lifetime(
                label, omega, _quantity(doc, "lifetime", TIME, "transition.")
            )
        return Transition.from_width(
            label, omega, _quantity(doc, "gamma_single", ENERGY, "transition.")
        )
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc), "transition") from None


def scenario_from_dict(doc: dict, name: str = "") -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("top level must be a JSON object")
    known = {f.name for f in fields(Scenario)} - {"name"}
    extra = set(doc) - known
    if extra:
        raise ScenarioError(f"unknown field(s) {sorted(extra)}")
    if "transition" not in doc:
        raise ScenarioError("missing required field", "transition")
    return Scenario(
        transition=_transition_from_doc(doc["transition"]),
        n_foils=_count(doc, "n_foils"),
        s_first=_count(doc, "s_first", integral=False),
        s_rest=_count(doc, "s_rest", integral=False),
        l_perp=_quantity(doc, "l_perp", LENGTH),
        grid_points=_count(doc, "grid_points", DEFAULT_GRID_POINTS),
        t_max_factor=_count(doc, "t_max_factor", DEFAULT_T_MAX_FACTOR, integral=False),
        n_wavecycles=_count(doc, "n_wavecycles", DEFAULT_N_WAVECYCLES),
        name=name,
    )


def load_scenario(source) -> Scenario:
    """Load and validate a scenario from a path or from JSON text."""
    name = ""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        text = path.read_text()
        name = path.stem
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return scenario_from_dict(doc, name=name)


def scenario_to_dict(scenario: Scenario) -> dict:
    t = scenario.transition
    return {
        "transition": {
            "label": t.label,
            "omega": units.format_quantity(t.omega),
            "lifetime": units.format_quantity(t.lifetime),
            "gamma_single": units.format_quantity(t.gamma_single),
        },
        "n_foils": scenario.n_foils,
        "s_first": scenario.s_first,
        "s_rest": scenario.s_rest,
        "l_perp": units.format_quantity(scenario.l_perp),
        "grid_points": scenario.grid_points,
        "t_max_factor": scenario.t_max_factor,
        "n_wavecycles": scenario.n_wavecycles,
    }


def save_scenario(scenario: Scenario, path=None) -> str:
    text = json.dumps(scenario_to_dict(scenario), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
