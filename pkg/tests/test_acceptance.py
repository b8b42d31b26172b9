"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import math
from pathlib import Path

import numpy as np
import pytest

from excitonlaser import cascade, cli, emission, nuclides, pump, quasispin, units
from excitonlaser.emission import Foil

BASELINE = Path(__file__).resolve().parent.parent / "scenarios" / "fe57_baseline.json"

pytestmark = pytest.mark.acceptance


def test_criterion_01_coherence_advantage(baseline, criterion):
    tr = baseline.transition
    formula = emission.coherence_advantage(baseline.s_first, baseline.l_perp, tr.wavelength)
    foil = Foil.half_filled(tr, baseline.s_first, baseline.l_perp)
    ratio = emission.tau_spontaneous(foil).value / tr.tau_single.value
    ok = (
        abs(formula - 0.0852) <= 1e-4
        and abs(ratio - 0.0852) <= 1e-4
        and abs(formula - ratio) <= 1e-12 * formula
        and round(formula, 2) == 0.09
    )
    criterion(1, "coherence advantage", ok, f"formula {formula:.6f}, timescale ratio {ratio:.6f}")


@pytest.mark.parametrize(
    "number, label, expected, published",
    [(2, "Fe57", 8.25e20, 8.3e20), (3, "Hg201", 8.02e15, 8.0e15)],
)
def test_criterion_02_03_pump_intensity(baseline, criterion, number, label, expected, published):
    tr = nuclides.builtin_transition(label)
    i = pump.required_pump_intensity(tr, baseline.n_wavecycles).to("W/cm2")
    ok = abs(i - expected) / expected <= 5e-3 and abs(i - published) / published <= 0.02
    criterion(number, f"pump intensity {label}", ok, f"{i:.4e} W/cm2 vs published {published:.1e}")


def test_criterion_04_two_foil_constant(baseline, criterion):
    res = cascade.run_cascade(baseline.replace(n_foils=2))
    numeric = res.per_foil[1].tau_st.value / res.tau_sp.value
    closed = emission.tau_stimulated_closed_form()
    ok = abs(numeric - closed) <= 1e-4 and abs(numeric - 0.15926) <= 1e-4 and round(numeric, 2) == 0.16
    criterion(4, "two-foil constant", ok, f"numeric {numeric:.6f}, closed form {closed:.6f}")


def test_criterion_05_cascade_power_law(baseline, criterion):
    res = cascade.run_cascade(baseline)
    ratios = [r for _, r in res.normalized_averages()]
    monotone = all(b > a for a, b in zip(ratios, ratios[1:]))
    p, r2 = res.fit_exponent, res.fit_r2
    ok = len(ratios) == 49 and monotone and 1.35 <= p <= 1.65 and r2 >= 0.99
    criterion(5, "cascade power law", ok, f"exponent {p:.4f}, r^2 {r2:.5f}, monotone {monotone}")


def test_criterion_06_pumping_growth_laws(baseline, criterion):
    g = pump.coupling_from_linewidth(baseline.transition)
    n_sub = cli.DEFAULT_SUBPULSES
    area = math.sqrt(1e-3) / (g * n_sub)
    args = (baseline.s_rest, g, area, n_sub, cli.DEFAULT_SEED, cli.DEFAULT_ENSEMBLE)
    coh = pump.simulate_incoherent_pump(*args, coherent=True).slope(10)
    inc = pump.simulate_incoherent_pump(*args).slope(10)
    ok = abs(coh - 2.0) <= 0.01 and abs(inc - 1.0) <= 0.1
    criterion(6, "pumping growth laws", ok, f"coherent slope {coh:.4f}, incoherent slope {inc:.4f}")


def test_criterion_07_oracle_equivalence(criterion):
    worst_entry = worst_algebra = 0.0
    for big_s in range(1, quasispin.MAX_DENSE_S + 1):
        dense = quasispin.build_collective_operators(big_s)
        brute = quasispin.tensor_product_collective_operators(big_s)
        for a, b in [(dense.sigma_plus, brute.sigma_plus), (dense.sigma_minus, brute.sigma_minus),
                     (dense.sigma_z, brute.sigma_z)]:
            worst_entry = max(worst_entry, float(np.max(np.abs(a - b))))
        for ops in (dense, brute):
            worst_algebra = max(worst_algebra, max(quasispin.su2_residuals(ops).values()))
    ok = worst_entry <= 1e-12 and worst_algebra <= 1e-10
    criterion(7, "oracle equivalence", ok, f"max entry diff {worst_entry:.2e}, max SU(2) residual {worst_algebra:.2e}")


def test_criterion_08_conservation(baseline, criterion):
    tr, lp = baseline.transition, baseline.l_perp
    first = Foil.half_filled(tr, baseline.s_first, lp)
    second = Foil.inverted(tr, baseline.s_rest, lp)
    tsp = emission.tau_spontaneous(first).value
    t = emission.time_grid(baseline.t_max_factor * tsp, baseline.grid_points)
    drive = emission.spontaneous_series(first, t)

    budget = first.s0 * first.omega
    remaining = emission.spontaneous_population(first, t) * first.omega
    sp_err = np.max(np.abs(emission.emitted_energy(drive, lp) + remaining - budget)) / budget

    out = emission.stimulated_intensity(second, drive)
    stored = emission.stored_energy(second, emission.stimulated_phase(second, drive))
    budget = second.big_s * second.omega
    st_err = np.max(np.abs(emission.emitted_energy(out, lp) + stored - budget)) / budget

    s_closed = emission.spontaneous_population(first, t)
    ode_err = np.max(np.abs(emission.integrate_population_ode(first, first.s0, t) - s_closed)) / first.big_s

    ok = sp_err <= 1e-6 and st_err <= 1e-6 and ode_err <= 1e-6
    criterion(8, "conservation", ok,
              f"spontaneous {sp_err:.2e}, stimulated {st_err:.2e}, ODE vs closed form {ode_err:.2e}")


def test_criterion_09_pulse_area_identity(baseline, criterion):
    res = cascade.run_cascade(baseline)
    g = Foil.inverted(baseline.transition, baseline.s_rest, baseline.l_perp).g_tilde
    residual = cascade.pulse_area_identity_check(res, g, baseline.transition.omega)
    criterion(9, "pulse-area identity", residual <= 1e-6, f"relative residual {residual:.2e} at foil {len(res.per_foil)}")


def _run_all(out):
    scenario = str(BASELINE)
    codes = [
        cli.main(["cascade", "--scenario", scenario, "--out", str(out / "cascade")]),
        cli.main(["emission", "--scenario", scenario, "--out", str(out / "emission")]),
        cli.main(["pump-mc", "--scenario", scenario, "--out", str(out / "pump"), "--ensemble", "200"]),
        cli.main(["feasibility", "--scenario", scenario, "--out", str(out / "feasibility")]),
    ]
    files = {p.relative_to(out): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()}
    return codes, files


def test_criterion_10_determinism(tmp_path, criterion, capsys):
    codes_a, a = _run_all(tmp_path / "a")
    codes_b, b = _run_all(tmp_path / "b")
    capsys.readouterr()
    manifests = [k for k in a if k.name == "manifest.json"]
    differing = sorted(str(k) for k in a.keys() | b.keys() if a.get(k) != b.get(k))
    ok = codes_a == codes_b == [0, 0, 0, 0] and not differing and len(manifests) == 4
    criterion(10, "determinism", ok, f"{len(a)} files in two runs, differing: {differing or 'none'}")


def test_uv_two_photon_order_of_magnitude(criterion):
    scheme = pump.TwoPhotonScheme.from_dipole_length(
        units.energy(3.0), units.energy(3.0), units.parse_quantity("1e13 Hz"),
        units.length(3 * units.BOHR_RADIUS_M, "m"),
    )
    i = pump.two_photon_pump_requirement(scheme, 10**4).geometric_mean.to("W/cm2")
    ok = 1e9 <= i <= 1e11
    criterion(11, "supplementary: UV two-photon estimate within 10x of 1e10 W/cm2", ok, f"{i:.3e} W/cm2")
