import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from excitonlaser import cli

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
BASELINE = str(SCENARIOS / "fe57_baseline.json")
HG201 = str(SCENARIOS / "hg201.json")


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def manifest_ok(out):
    doc = json.loads((out / "manifest.json").read_text())
    for entry in doc["outputs"]:
        assert cli.sha256_of(out / entry["file"]) == entry["sha256"]
    return doc


def test_feasibility_prints_table(capsys):
    assert cli.main(["feasibility", "--scenario", HG201]) == 0
    text = capsys.readouterr().out
    assert "pump_intensity_W_per_cm2" in text
    assert "8.02" in text and "e+15" in text


def test_feasibility_json(tmp_path, capsys):
    assert cli.main(["feasibility", "--scenario", BASELINE, "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "feasibility.json").read_text())
    assert doc["tau_sp_over_tau_single"] == pytest.approx(0.0852, abs=1e-4)
    assert doc["pump_intensity_W_per_cm2"] == pytest.approx(8.25e20, rel=5e-3)
    manifest_ok(tmp_path)


def test_cascade_outputs(tmp_path, capsys):
    assert cli.main(["cascade", "--scenario", BASELINE, "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "fig3.csv")
    assert rows[0] == ["n", "avg_over_avg2"]
    body = rows[1:]
    assert len(body) == 49
    assert [int(r[0]) for r in body] == list(range(2, 51))
    values = [float(r[1]) for r in body]
    assert values[0] == 1.0
    assert all(b > a for a, b in zip(values, values[1:]))
    summary = json.loads((tmp_path / "cascade_summary.json").read_text())
    assert 1.35 <= summary["fit"]["exponent"] <= 1.65
    doc = manifest_ok(tmp_path)
    assert doc["command"] == "cascade"
    assert {e["file"] for e in doc["outputs"]} == {"cascade_summary.json", "fig3.csv"}


def test_cascade_dump_series(tmp_path, capsys):
    args = ["cascade", "--scenario", BASELINE, "--out", str(tmp_path), "--dump-series", "--grid-points", "8192"]
    assert cli.main(args) == 0
    dumped = sorted(tmp_path.glob("series_foil_*.csv"))
    assert len(dumped) == 50
    rows = read_csv(dumped[-1])
    assert rows[0] == ["t_s", "intensity_W_per_cm2"]
    assert len(rows) == 8193
    assert len(manifest_ok(tmp_path)["outputs"]) == 52


def test_grid_override_changes_little(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["cascade", "--scenario", BASELINE, "--out", str(a)]) == 0
    assert cli.main(["cascade", "--scenario", BASELINE, "--out", str(b), "--grid-points", "32768"]) == 0
    pa = json.loads((a / "cascade_summary.json").read_text())["fit"]["exponent"]
    pb = json.loads((b / "cascade_summary.json").read_text())["fit"]["exponent"]
    assert abs(pa - pb) <= 0.01
    assert json.loads((b / "manifest.json").read_text())["parameters"]["grid_points"] == 32768


def test_cascade_batch(tmp_path, capsys):
    args = ["cascade", "--scenario", BASELINE, "--scenario", HG201, "--out", str(tmp_path), "--jobs", "2"]
    assert cli.main(args) == 0
    for stem in ("fe57_baseline", "hg201"):
        assert (tmp_path / stem / "fig3.csv").is_file()
        manifest_ok(tmp_path / stem)


def test_emission_outputs(tmp_path, capsys):
    assert cli.main(["emission", "--scenario", BASELINE, "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "emission_summary.json").read_text())
    assert summary["tau_st_over_tau_sp"] == pytest.approx(0.159292, abs=1e-5)
    assert summary["ode_max_abs_error_over_S"] <= 1e-6
    assert summary["stimulated_reabsorbs"] is True
    assert read_csv(tmp_path / "population.csv")[0] == ["t_s", "s_closed", "s_ode"]
    manifest_ok(tmp_path)


def test_pump_mc_same_seed_identical(tmp_path, capsys):
    base = ["pump-mc", "--scenario", BASELINE, "--ensemble", "50", "--n-subpulses", "100"]
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert cli.main(base + ["--out", str(a), "--seed", "7"]) == 0
    assert cli.main(base + ["--out", str(b), "--seed", "7"]) == 0
    assert cli.main(base + ["--out", str(c), "--seed", "8"]) == 0
    for name in ("pump_mc_incoherent.csv", "pump_mc_coherent.csv", "pump_mc_summary.json", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert (a / "pump_mc_incoherent.csv").read_bytes() != (c / "pump_mc_incoherent.csv").read_bytes()
    assert (a / "pump_mc_coherent.csv").read_bytes() == (c / "pump_mc_coherent.csv").read_bytes()
    assert json.loads((a / "manifest.json").read_text())["seed"] == 7


def test_pump_mc_single_member_ensemble(tmp_path, capsys):
    args = ["pump-mc", "--scenario", BASELINE, "--ensemble", "1", "--n-subpulses", "20", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    rows = read_csv(tmp_path / "pump_mc_incoherent.csv")
    assert rows[0] == ["j", "mean_n", "stderr_n"]
    assert all(r[2] == "inf" for r in rows[1:])


@pytest.mark.parametrize(
    "argv",
    [
        ["cascade", "--out", "x"],
        ["cascade", "--scenario", "does/not/exist.json", "--out", "x"],
        ["emission", "--scenario", BASELINE],
        ["feasibility", "--scenario", BASELINE, "--scenario", HG201],
    ],
)
def test_usage_errors_exit_2(argv, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert cli.main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file_named_in_message(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert cli.main(["feasibility", "--scenario", str(missing)]) == 2
    assert str(missing) in capsys.readouterr().err


def test_bad_scenario_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"transition": "Fe57", "n_foils": 0}')
    assert cli.main(["feasibility", "--scenario", str(bad)]) == 2


def test_simulation_failure_exit_1(tmp_path, capsys):
    args = ["cascade", "--scenario", BASELINE, "--out", str(tmp_path), "--grid-points", "256"]
    assert cli.main(args) == 1
    assert "simulation error" in capsys.readouterr().err


def test_argparse_rejects_bad_seed(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["pump-mc", "--scenario", BASELINE, "--seed", "-1"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "excitonlaser", "feasibility", "--scenario", BASELINE],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "tau_sp_over_tau_single" in proc.stdout
