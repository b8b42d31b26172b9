"""Dynamical model of a multi-foil nuclear-exciton laser in natural units."""

__version__ = "0.1.0"

from .units import Quantity, parse_quantity
from .nuclides import Scenario, Transition, builtin_transition, load_scenario, baseline_scenario
from .emission import Foil, PulseSeries
from .cascade import CascadeResult, run_cascade

__all__ = [
    "CascadeResult",
    "Foil",
    "PulseSeries",
    "Quantity",
    "Scenario",
    "Transition",
    "builtin_transition",
    "load_scenario",
    "baseline_scenario",
    "parse_quantity",
    "run_cascade",
]
