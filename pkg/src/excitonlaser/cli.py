"""Command-line front end.

Exit codes: 0 success, 1 simulation or regime failure, 2 usage/config error.
Every run that writes files also writes ``manifest.json`` listing each
output with its SHA-256 digest.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, cascade, emission, nuclides, pump, units
from .emission import Foil

EXIT_OK, EXIT_SIM, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 20130101
DEFAULT_ENSEMBLE = 1000
DEFAULT_SUBPULSES = 1000

_CONFIG_ERRORS = (nuclides.ScenarioError, units.UnitError, units.DimensionError, OSError)
_SIM_ERRORS = (
    cascade.CascadeError,
    emission.InsufficientDriveError,
    emission.IntegrationError,
    emission.GridError,
    pump.RegimeError,
)


class UsageError(Exception):
    pass


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_via(path: Path, writer) -> None:
    """Run ``writer(tmp_path)`` and rename the result into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(rows, header) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else _fmt17(c) for c in row))
    return "\n".join(lines) + "\n"


def _fmt17(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{x:.17g}"


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n"


def sha256_of(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out: Path, command: str, scenario_path, parameters: dict, files, seed=None) -> Path:
    manifest = {
        "tool": "excitonlaser",
        "version": __version__,
        "command": command,
        "scenario": str(scenario_path) if scenario_path is not None else None,
        "parameters": parameters,
        "seed": seed,
        "outputs": [{"file": f.name, "sha256": sha256_of(f)} for f in sorted(files)],
    }
    path = out / "manifest.json"
    _atomic_write(path, _json(manifest))
    return path


def _load(args, path) -> nuclides.Scenario:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"scenario file not found: {p}")
    sc = nuclides.load_scenario(p)
    changes = {}
    if getattr(args, "grid_points", None) is not None:
        changes["grid_points"] = args.grid_points
    if getattr(args, "t_max_factor", None) is not None:
        changes["t_max_factor"] = args.t_max_factor
    return sc.replace(**changes) if changes else sc


def _one_scenario(args):
    if not args.scenario:
        raise UsageError("--scenario is required")
    if len(args.scenario) > 1:
        raise UsageError(f"{args.command} takes a single --scenario")
    return args.scenario[0], _load(args, args.scenario[0])


# -- feasibility -------------------------------------------------------------


def feasibility_summary(sc: nuclides.Scenario) -> dict:
    tr = sc.transition
    foil = Foil.half_filled(tr, sc.s_first, sc.l_perp)
    g = pump.coupling_from_linewidth(tr)
    tau_sp = emission.tau_spontaneous(foil)
    i_pump = pump.required_pump_intensity(tr, sc.n_wavecycles)
    return {
        "transition": tr.label,
        "omega_eV": tr.omega.to("eV"),
        "wavelength_nm": tr.wavelength.to("nm"),
        "tau_single_s": tr.tau_single.to("s"),
        "tau_sp_s": tau_sp.to("s"),
        "tau_sp_over_tau_single": emission.coherence_advantage(sc.s_first, sc.l_perp, tr.wavelength),
        "g_tilde": g,
        "gamma_coll_eV": foil.gamma_coll,
        "n_wavecycles": sc.n_wavecycles,
        "tau_pump_s": 2 * math.pi * sc.n_wavecycles / tr.omega.value * units.HBAR_EV_S,
        "pump_intensity_W_per_cm2": i_pump.to("W/cm2"),
        "pi_pulse_area": pump.pi_pulse_area(g),
        "tau_st_over_tau_sp_two_foil": emission.tau_stimulated_closed_form(),
    }


def cmd_feasibility(args) -> int:
    path, sc = _one_scenario(args)
    summary = feasibility_summary(sc)
    width = max(map(len, summary))
    for key, value in summary.items():
        shown = f"{value:.6g}" if isinstance(value, float) else str(value)
        print(f"{key:<{width}}  {shown}")
    if args.out:
        out = Path(args.out)
        f = out / "feasibility.json"
        _atomic_write(f, _json(summary))
        write_manifest(out, "feasibility", path, nuclides.scenario_to_dict(sc), [f])
    return EXIT_OK


# -- cascade -----------------------------------------------------------------


def _run_cascade_to(path, sc: nuclides.Scenario, out: Path, dump_series: bool) -> dict:
    result = cascade.run_cascade(sc, keep_series=dump_series)
    files = []
    f = out / "cascade_summary.json"
    _atomic_write(f, result.to_json())
    files.append(f)
    f = out / "fig3.csv"
    _atomic_write(f, _csv(result.normalized_averages(), ["n", "avg_over_avg2"]))
    files.append(f)
    if dump_series and result.series:
        for n, series in enumerate(result.series, start=1):
            f = out / f"series_foil_{n:03d}.csv"
            _atomic_via(f, series.to_csv)
            files.append(f)
    params = nuclides.scenario_to_dict(sc) | {"dump_series": dump_series}
    write_manifest(out, "cascade", path, params, files)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return {"scenario": str(path), "fit_exponent": result.fit_exponent, "fit_r2": result.fit_r2}


def _cascade_job(job):
    path, sc, out, dump = job
    return _run_cascade_to(path, sc, out, dump)


def cmd_cascade(args) -> int:
    if not args.scenario:
        raise UsageError("--scenario is required")
    if not args.out:
        raise UsageError("--out is required for cascade")
    out = Path(args.out)
    jobs = []
    for path in args.scenario:
        sc = _load(args, path)
        target = out if len(args.scenario) == 1 else out / Path(path).stem
        jobs.append((path, sc, target, args.dump_series))
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_cascade_job, jobs))
    else:
        results = [_cascade_job(j) for j in jobs]
    for r in results:
        print(f"{r['scenario']}: fit exponent {r['fit_exponent']:.6g}, r^2 {r['fit_r2']:.6g}")
    return EXIT_OK


# -- pump-mc -----------------------------------------------------------------


def cmd_pump_mc(args) -> int:
    path, sc = _one_scenario(args)
    if not args.out:
        raise UsageError("--out is required for pump-mc")
    out = Path(args.out)
    big_s = sc.s_rest
    g = pump.coupling_from_linewidth(sc.transition)
    n_sub = args.n_subpulses
    area = args.sub_pulse_area
    if area is None:
        # coherent run ends at n = 1e-3 S, deep in the bosonic regime
        area = math.sqrt(1e-3) / (g * n_sub)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", pump.RegimeWarning)
        coh = pump.simulate_incoherent_pump(big_s, g, area, n_sub, args.seed, args.ensemble, coherent=True)
        inc = pump.simulate_incoherent_pump(big_s, g, area, n_sub, args.seed, args.ensemble)
    regime = [str(w.message) for w in caught if issubclass(w.category, pump.RegimeWarning)]
    for msg in regime:
        print(f"warning: {msg}", file=sys.stderr)

    j_min = min(10, n_sub)
    files = []
    f = out / "pump_mc_coherent.csv"
    _atomic_via(f, coh.to_csv)
    files.append(f)
    f = out / "pump_mc_incoherent.csv"
    _atomic_via(f, inc.to_csv)
    files.append(f)
    summary = {
        "big_s": big_s,
        "g_tilde": g,
        "sub_pulse_area": area,
        "n_subpulses": n_sub,
        "ensemble": args.ensemble,
        "seed": args.seed,
        "fit_range": [j_min, n_sub],
        "coherent_slope": coh.slope(j_min) if n_sub - j_min >= 2 else None,
        "incoherent_slope": inc.slope(j_min) if n_sub - j_min >= 2 else None,
        "regime_warnings": regime,
    }
    f = out / "pump_mc_summary.json"
    _atomic_write(f, _json(summary))
    files.append(f)
    params = nuclides.scenario_to_dict(sc) | {
        "ensemble": args.ensemble,
        "n_subpulses": n_sub,
        "sub_pulse_area": area,
    }
    write_manifest(out, "pump-mc", path, params, files, seed=args.seed)
    print(f"coherent slope {summary['coherent_slope']}, incoherent slope {summary['incoherent_slope']}")
    return EXIT_OK


# -- emission ----------------------------------------------------------------


def cmd_emission(args) -> int:
    path, sc = _one_scenario(args)
    if not args.out:
        raise UsageError("--out is required for emission")
    out = Path(args.out)
    tr = sc.transition
    first = Foil.half_filled(tr, sc.s_first, sc.l_perp)
    second = Foil.inverted(tr, sc.s_rest, sc.l_perp)
    tau_sp = emission.tau_spontaneous(first)
    t = emission.time_grid(sc.t_max_factor * tau_sp.value, sc.grid_points)
    i_sp = emission.spontaneous_series(first, t)
    i_st = emission.stimulated_intensity(second, i_sp)
    tau_st = emission.tau_stimulated(second, i_sp)
    s_closed = emission.spontaneous_population(first, t)
    s_ode = emission.integrate_population_ode(first, first.s0, t)

    files = []
    f = out / "spontaneous.csv"
    _atomic_via(f, i_sp.to_csv)
    files.append(f)
    f = out / "stimulated.csv"
    _atomic_via(f, i_st.to_csv)
    files.append(f)
    f = out / "population.csv"
    _atomic_write(f, _csv(zip(t * units.HBAR_EV_S, s_closed, s_ode), ["t_s", "s_closed", "s_ode"]))
    files.append(f)
    summary = {
        "tau_sp_s": tau_sp.to("s"),
        "tau_st_s": tau_st.to("s"),
        "tau_st_over_tau_sp": tau_st.value / tau_sp.value,
        "tau_st_over_tau_sp_closed_form": emission.tau_stimulated_closed_form(),
        "ode_max_abs_error_over_S": float(np.max(np.abs(s_ode - s_closed)) / first.big_s),
        "stimulated_reabsorbs": i_st.reabsorbing,
    }
    f = out / "emission_summary.json"
    _atomic_write(f, _json(summary))
    files.append(f)
    write_manifest(out, "emission", path, nuclides.scenario_to_dict(sc), files)
    print(f"tau_st/tau_sp = {summary['tau_st_over_tau_sp']:.6g}")
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", action="append", help="scenario JSON file (repeatable for cascade)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--grid-points", type=int, help="override the scenario's grid_points")
    common.add_argument("--t-max-factor", type=float, help="override the grid length in units of tau_sp")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="PRNG seed (u64)")
    common.add_argument("--ensemble", type=_positive_int, default=DEFAULT_ENSEMBLE)
    common.add_argument("--dump-series", action="store_true", help="write per-foil intensity CSVs")
    common.add_argument("--jobs", type=_positive_int, default=1, help="parallel scenario batches")

    parser = argparse.ArgumentParser(prog="excitonlaser", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("feasibility", parents=[common], help="timescales and pump intensity")
    sub.add_parser("cascade", parents=[common], help="multi-foil amplification (fig3.csv)")
    mc = sub.add_parser("pump-mc", parents=[common], help="coherent vs incoherent pumping")
    mc.add_argument("--n-subpulses", type=_positive_int, default=DEFAULT_SUBPULSES)
    mc.add_argument("--sub-pulse-area", type=float, help="\\int A dt per sub-pulse (natural units)")
    sub.add_parser("emission", parents=[common], help="single-foil spontaneous/stimulated series")
    return parser


_COMMANDS = {
    "feasibility": cmd_feasibility,
    "cascade": cmd_cascade,
    "pump-mc": cmd_pump_mc,
    "emission": cmd_emission,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed < 0 or args.seed >= 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _SIM_ERRORS as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIM


if __name__ == "__main__":
    sys.exit(main())
