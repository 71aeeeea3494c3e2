import csv
import io
import json
import math

import pytest

from chainbell.cli import main
from chainbell.config import ConfigError, ExperimentConfig

BB_GEOMETRY = {"alice_t": 5, "alice_x": -5, "bob_t": 5, "bob_x": 5, "beta_A": -0.5, "beta_B": 0.5}


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def write_config(tmp_path, name="cfg.json", **data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_timing_before_before(tmp_path):
    code, out = run(["timing", "--config", write_config(tmp_path, **BB_GEOMETRY)])
    assert code == 0
    assert "timing: BeforeBefore" in out


def test_timing_simultaneity_tie(tmp_path):
    cfg = dict(BB_GEOMETRY, beta_A=0.0, beta_B=0.0)
    code, out = run(["timing", "--config", write_config(tmp_path, **cfg)])
    assert code == 0
    assert "AfterAfter (simultaneity tie)" in out


def test_timing_timelike_rejected(tmp_path, capsys):
    cfg = dict(BB_GEOMETRY, bob_t=20.0)
    code, _ = run(["timing", "--config", write_config(tmp_path, **cfg)])
    assert code == 2
    assert "spacelike" in capsys.readouterr().err


def test_timing_needs_geometry():
    assert run(["timing"])[0] == 2


def test_simulate_quantum(tmp_path):
    code, out = run(["simulate", "--trials", "200000", "--out-dir", str(tmp_path)])
    assert code == 0
    value = float(out.split("I_hat(N=2) = ")[1].split()[0])
    assert value == pytest.approx(2 - math.sqrt(2), abs=0.01)
    header = (tmp_path / "inequality.csv").read_text().splitlines()[0]
    assert header == "N,I_hat,std_err"
    assert (tmp_path / "counts.csv").read_text().startswith("alice_setting,bob_setting,n_pp,n_pm,n_mp,n_mm,n\n")


@pytest.mark.parametrize("geometry, expected", [(BB_GEOMETRY, 2.0), (dict(BB_GEOMETRY, beta_A=0.5, beta_B=-0.5), 0.586)])
def test_simulate_suarez_scarani(tmp_path, geometry, expected):
    cfg = write_config(tmp_path, model="suarez-scarani", out_dir=str(tmp_path), trials=200000, **geometry)
    code, out = run(["simulate", "--config", cfg])
    assert code == 0
    value = float(out.split("I_hat(N=2) = ")[1].split()[0])
    assert value == pytest.approx(expected, abs=0.01)


def test_simulate_insufficient_data(tmp_path, capsys):
    cfg = write_config(tmp_path, setting_choice="random-uniform", trials=100, out_dir=str(tmp_path))
    assert run(["simulate", "--config", cfg])[0] == 4
    assert "insufficient data" in capsys.readouterr().err


def test_simulate_random_uniform(tmp_path):
    cfg = write_config(tmp_path, setting_choice="random-uniform", trials=400000, out_dir=str(tmp_path))
    code, out = run(["simulate", "--config", cfg])
    assert code == 0
    assert float(out.split("I_hat(N=2) = ")[1].split()[0]) == pytest.approx(0.586, abs=0.02)


def test_simulate_byte_identical(tmp_path):
    bodies = []
    for workers in (1, 3):
        d = tmp_path / f"w{workers}"
        code, _ = run(["simulate", "--trials", "300000", "--workers", str(workers), "--out-dir", str(d)])
        assert code == 0
        bodies.append(((d / "counts.csv").read_bytes(), (d / "inequality.csv").read_bytes()))
    assert bodies[0] == bodies[1]
    assert b"\r" not in bodies[0][0]


def test_scan_phase(tmp_path):
    cfg = write_config(tmp_path, visibility=0.97, n_phases=16, trials=100000, out_dir=str(tmp_path))
    code, out = run(["scan-phase", "--config", cfg])
    assert code == 0
    v = float(out.split("V_hat = ")[1].split()[0])
    assert abs(v - 0.97) < 0.01
    lines = (tmp_path / "phase_scan.csv").read_text().splitlines()
    assert lines[0] == "phi,p_equal,std_err,n" and len(lines) == 17


def test_scan_phase_flat(tmp_path):
    cfg = write_config(tmp_path, visibility=0.0, trials=20000, out_dir=str(tmp_path))
    code, out = run(["scan-phase", "--config", cfg])
    assert code == 0
    assert abs(float(out.split("V_hat = ")[1].split()[0])) < 0.05


def test_scan_phase_too_few_points(tmp_path):
    cfg = write_config(tmp_path, n_phases=4, trials=1000, out_dir=str(tmp_path))
    assert run(["scan-phase", "--config", cfg])[0] == 2


def test_figure3(tmp_path):
    code, out = run(["figure3", "--V", "0.999", "1", "0.99", "--n-max", "500", "--out-dir", str(tmp_path)])
    assert code == 0
    minima = (tmp_path / "figure3_minima.csv").read_text().splitlines()
    assert minima[0] == "V,N_star,I_min,monotone"
    assert minima[1].startswith("0.999,35,0.0702") and minima[1].endswith(",false")
    assert minima[2].startswith("1.0,500,") and minima[2].endswith(",true")
    assert minima[3].startswith("0.99,11,0.2208")
    with open(tmp_path / "figure3_V0.999.csv", newline="") as fh:
        curve = list(csv.reader(fh))
    assert curve[0] == ["N", "I(N,pi)"] and len(curve) == 500
    assert curve[34][0] == "35" and float(curve[34][1]) == pytest.approx(0.0702, abs=5e-4)
    assert "monotone" in out


def test_figure3_deterministic(tmp_path):
    run(["figure3", "--V", "0.97", "--n-max", "100", "--out-dir", str(tmp_path / "a")])
    run(["figure3", "--V", "0.97", "--n-max", "100", "--out-dir", str(tmp_path / "b")])
    assert (tmp_path / "a" / "figure3_V0.97.csv").read_bytes() == (tmp_path / "b" / "figure3_V0.97.csv").read_bytes()


def test_check_extension_contradictory(tmp_path):
    csv_path = tmp_path / "verdict.csv"
    code, out = run(["check-extension", "--D", "0.25", "--V", "0.999", "--n-max", "500", "--csv", str(csv_path)])
    assert code == 3
    assert out.startswith("CONTRADICTORY: bound 0.105 < claimed 0.25")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "claimed_D,V,N_star,I_min,bound,contradictory"
    assert lines[1].startswith("0.25,0.999,35,") and lines[1].endswith(",true")


@pytest.mark.parametrize("D, V", [(0.10, 0.999), (0.0, 0.5)])
def test_check_extension_consistent(D, V):
    code, out = run(["check-extension", "--D", str(D), "--V", str(V)])
    assert code == 0
    assert out.startswith("consistent")


def test_check_extension_validation():
    assert run(["check-extension", "--D", "0.9", "--V", "0.9"])[0] == 2
    assert run(["check-extension", "--V", "0.9"])[0] == 2


def test_nonsignaling_command(tmp_path):
    code, out = run(["nonsignaling", "--trials", "20000", "--out-dir", str(tmp_path)])
    assert code == 0 and "PASS" in out
    cfg = write_config(tmp_path, model="signaling-toy", delta=0.25, trials=20000, out_dir=str(tmp_path))
    code, out = run(["nonsignaling", "--config", cfg])
    assert code == 1 and "FAIL" in out
    assert (tmp_path / "nonsignaling.txt").read_text() == out


def test_config_roundtrip(tmp_path):
    cfg = ExperimentConfig.from_dict(dict(BB_GEOMETRY, model="suarez-scarani", phases=[0.0, 1.0], seed=3))
    path = tmp_path / "c.json"
    cfg.dump(path)
    again = ExperimentConfig.load(path)
    assert again == cfg
    assert ExperimentConfig.from_dict(again.to_dict()) == cfg


@pytest.mark.parametrize(
    "data, key",
    [
        ({"modle": "quantum"}, "modle"),
        ({"model": "leggett"}, "model"),
        ({"visibility": 1.5}, "visibility"),
        ({"N": 2.5}, "N"),
        ({"trials": "many"}, "trials"),
        ({"timing": "Sometimes"}, "timing"),
        (dict(BB_GEOMETRY, timing="AfterAfter"), "timing"),
        ({"alice_t": 0.0}, "geometry"),
        (dict(BB_GEOMETRY, bob_t=50), "geometry"),
        ({"phases": [0, "x"]}, "phases"),
        ({"omega_A": -1.0}, "interferometer"),
    ],
)
def test_config_errors_name_the_key(data, key):
    with pytest.raises(ConfigError, match=key):
        ExperimentConfig.from_dict(data)


def test_config_json_error_has_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "model": "quantum",\n  "N": \n}')
    with pytest.raises(ConfigError, match="line 4"):
        ExperimentConfig.load(path)
    assert run(["simulate", "--config", str(path)])[0] == 2


def test_explicit_timing_config(tmp_path):
    cfg = write_config(tmp_path, model="suarez-scarani", timing="BeforeBefore", trials=100000, out_dir=str(tmp_path))
    code, out = run(["simulate", "--config", cfg])
    assert code == 0 and "timing: BeforeBefore" in out
