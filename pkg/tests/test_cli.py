import csv
import io
import json
import math
import subprocess
import sys

import pytest

from dipole_decoherence import cli
from dipole_decoherence.errors import QuadratureError

INDUCED = """\
channel = environment_induces_crystal
model = short_approx
crystal.radius = 1e-6 m
crystal.relative_permittivity = 5.7
environment.species = probe
environment.mass = 1e-27 kg
environment.dipole = 1e-29 Cm
environment.T = 1 K
environment.n = {n} m-3
superposition.delta_x = 1e-5 m
"""

PERMANENT_HIGH = """\
channel = permanent_permanent
model = short_approx
crystal.radius = 1e-6 m
crystal.dipole = 1e-23 Cm
environment.species = probe
environment.mass = 1e-27 kg
environment.dipole = 1 Debye
environment.T = 1 K
environment.n = 1e8 m-3
"""

SWEEP = INDUCED.format(n="1e8") + """\
sweep.variable = environment.T
sweep.lo = 0.1 K
sweep.hi = 10 K
sweep.points = 7
sweep.overlay = environment.n
sweep.overlay_values = 1e7, 1e8
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="scenario.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_rate_text(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_rate_baseline_passes_budget(write, capsys):
    code, out, _ = run(["rate", "--config", write(INDUCED.format(n="1e8"))], capsys)
    fields = parse_rate_text(out)
    assert code == 0
    assert abs(math.log10(float(fields["gamma_Hz"])) + 9) <= 1
    assert fields["budget"] == "PASS"
    assert fields["regime"] == "short"


def test_rate_over_budget(write, capsys):
    path = write(PERMANENT_HIGH)
    code, out, _ = run(["rate", "--config", path], capsys)
    fields = parse_rate_text(out)
    assert code == 0 and fields["budget"] == "FAIL"
    assert float(fields["gamma_Hz"]) > 1e-2
    code, _, _ = run(["rate", "--config", path, "--enforce-budget"], capsys)
    assert code == cli.EXIT_BUDGET
    code, _, _ = run(["rate", "--config", path, "--enforce-budget", "1e9"], capsys)
    assert code == 0


def test_rate_zero_density(write, capsys):
    code, out, _ = run(["rate", "--config", write(INDUCED.format(n="0")), "--enforce-budget"], capsys)
    fields = parse_rate_text(out)
    assert code == 0 and float(fields["gamma_Hz"]) == 0.0 and fields["coherence_time_s"] == "inf"


def test_rate_json(write, capsys):
    code, out, _ = run(["rate", "--config", write(INDUCED.format(n="1e8")), "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["budget"] == "PASS" and data["gamma_Hz"] > 0


def test_rate_maxwell_boltzmann_override(write, capsys):
    text = INDUCED.format(n="1e8").replace("short_approx", "short")
    path = write(text)
    _, out_delta, _ = run(["rate", "--config", path], capsys)
    _, out_mb, _ = run(["rate", "--config", path, "--distribution", "mb"], capsys)
    ratio = float(parse_rate_text(out_mb)["gamma_Hz"]) / float(parse_rate_text(out_delta)["gamma_Hz"])
    assert ratio == pytest.approx(2 / math.sqrt(math.pi), rel=1e-3)


def test_config_error_exit(write, capsys):
    code, _, err = run(["rate", "--config", write("crystal.radius = 1 K\n")], capsys)
    assert code == cli.EXIT_CONFIG and "line 1" in err


def test_regime_error_exit(write, capsys):
    text = INDUCED.format(n="1e8").replace("crystal.radius = 1e-6 m", "crystal.radius = 1e-9 m")
    code, _, err = run(["rate", "--config", write(text)], capsys)
    assert code == cli.EXIT_REGIME and "regime" in err


def test_numeric_error_exit(write, capsys, monkeypatch):
    def boom(cfg):
        raise QuadratureError("did not converge", achieved=1e-3, requested=1e-8)

    monkeypatch.setattr(cli, "evaluate", boom)
    code, _, err = run(["rate", "--config", write(INDUCED.format(n="1e8"))], capsys)
    assert code == cli.EXIT_NUMERIC and "did not converge" in err


def test_sweep_is_deterministic_and_ordered(write, capsys):
    path = write(SWEEP)
    _, serial, _ = run(["sweep", "--config", path], capsys)
    _, parallel, _ = run(["sweep", "--config", path, "--jobs", "4"], capsys)
    assert serial == parallel
    rows = list(csv.DictReader(io.StringIO(serial)))
    assert len(rows) == 14
    assert [r["environment.n"] for r in rows] == ["1.00000000e+07"] * 7 + ["1.00000000e+08"] * 7
    temps = [float(r["environment.T"]) for r in rows[:7]]
    assert temps == sorted(temps)


def test_csv_format(write, capsys, tmp_path):
    out_path = tmp_path / "out.csv"
    code, _, _ = run(["sweep", "--config", write(SWEEP), "--out", str(out_path)], capsys)
    raw = out_path.read_bytes()
    assert code == 0 and b"\r" not in raw
    rows = list(csv.DictReader(io.StringIO(raw.decode())))
    mantissa = rows[0]["gamma_Hz"].split("e")[0].replace(".", "")
    assert len(mantissa) == 9
    for r in rows:
        g = float(r["gamma_Hz"])
        assert math.isfinite(g) and g >= 0


def test_csv_round_trip_precision(write, capsys):
    from dipole_decoherence.config import parse_config

    _, out, _ = run(["sweep", "--config", write(SWEEP)], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    cfg = parse_config(SWEEP)
    for r in rows[:7]:
        c = cfg.with_field("environment.n", 1e7).with_field("environment.T", float(r["environment.T"]))
        exact = cli.evaluate(c).gamma
        # 9 significant digits bound the relative rounding error by 5e-9
        assert abs(float(r["gamma_Hz"]) - exact) / exact <= 5e-9


def test_sweep_row_error_has_context(write, capsys):
    text = SWEEP.replace("sweep.lo = 0.1 K", "sweep.lo = 1e-9 K")
    code, _, err = run(["sweep", "--config", write(text)], capsys)
    assert code == cli.EXIT_REGIME and "sweep point environment.T=" in err


def test_sweep_json(write, capsys):
    code, out, _ = run(["sweep", "--config", write(SWEEP), "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and len(data) == 14 and set(data[0]) >= {"gamma_Hz", "regime", "environment.T"}


def test_table1(capsys):
    code, out, _ = run(["table1"], capsys)
    rows = {r["species"]: r for r in csv.DictReader(io.StringIO(out))}
    assert code == 0 and set(rows) == {"N2", "O2", "Ar", "CO2"}
    assert float(rows["N2"]["d2_Cm"]) == pytest.approx(3.425e-35, rel=0.02)
    code, out, _ = run(["table1", "--field", "0"], capsys)
    assert all(float(r["d2_Cm"]) == 0.0 for r in csv.DictReader(io.StringIO(out)))


def test_preset_fig3_columns(capsys):
    code, out, _ = run(["preset", "fig3"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and list(rows[0]) == ["environment.dipole", "budget", "d1_max_Cm"]
    assert len(rows) == 4 * 31


def test_validate(capsys):
    code, out, _ = run(["validate", "--format", "json"], capsys)
    checks = json.loads(out)
    assert code == 0 and all(c["passed"] for c in checks)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dipole_decoherence", "preset", "table1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("species,")
