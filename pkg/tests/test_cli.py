import json

import numpy as np
import pytest

from qbattery import advantage, checks
from qbattery.advantage import CommutationMatrix
from qbattery.cli import main, parse_state


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_dict(csv_text):
    rows = [line.split(",", 1) for line in csv_text.splitlines()[1:]]
    return dict(rows)


def test_advantage_w5(capsys):
    code, out, _ = run(capsys, "advantage", "--state", "w:5")
    assert code == 0
    assert float(as_dict(out)["gamma_c"]) == pytest.approx(2.6, abs=1e-12)


def test_advantage_ghz4_json(capsys):
    code, out, _ = run(capsys, "advantage", "--state", "ghz:4", "--format", "json")
    assert code == 0
    assert json.loads(out)["gamma_c"] == pytest.approx(1.0, abs=1e-12)


def test_advantage_random_separable(capsys):
    code, out, _ = run(capsys, "advantage", "--state", "random-sep:seed=7")
    assert code == 0
    assert float(as_dict(out)["gamma_c"]) <= 1 + 1e-8


def test_advantage_power_report(capsys):
    code, out, _ = run(capsys, "advantage", "--state", "random-pure:dims=3x3,seed=2",
                       "--hamiltonian", "aligned", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["ratio"] == pytest.approx(1.0, abs=1e-10)
    assert report["kappa"] == pytest.approx(1.0, abs=1e-12)


def test_state_seed_falls_back_to_flag():
    a = parse_state("random-pure:dims=2x2", seed=5).amplitudes
    b = parse_state("random-pure:dims=2x2,seed=5").amplitudes
    assert np.array_equal(a, b)


@pytest.mark.parametrize("argv", [
    ["advantage", "--state", "nonsense:3"],
    ["advantage", "--state", "w:x"],
    ["advantage", "--state", "w:40"],
    ["advantage", "--state", "random-sep:colour=red"],
    ["advantage", "--state", "ghz:3", "--hamiltonian", "sigma-z"],
    ["advantage"],
    ["wtable", "--n-max", "13"],
    ["thermalize", "--dt", "0.5"],
    ["syk", "--N", "20"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_config_parse_error_reports_position(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"D": 3,\n "kT": }\n')
    code, _, err = run(capsys, "thermalize", "--config", str(cfg))
    assert code == 2
    assert "line 2, column 8" in err


def test_config_unknown_field(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"N": 6, "temperature": 3}')
    code, _, err = run(capsys, "syk", "--config", str(cfg))
    assert code == 2
    assert "temperature" in err


def test_flags_override_config_and_sidecar(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"D": 3, "t_final": 0.2, "record_every": 50}')
    before = cfg.read_text()
    out = tmp_path / "trace.csv"
    code, _, _ = run(capsys, "thermalize", "--config", str(cfg), "--D", "2", "--out", str(out), "--seed", "9")
    assert code == 0
    side = json.loads((tmp_path / "trace.csv.config.json").read_text())
    assert side["D"] == 2 and side["t_final"] == 0.2 and side["seed"] == 9
    assert cfg.read_text() == before
    first = out.read_text().splitlines()[1].split(",")
    assert float(first[1]) == pytest.approx(2.0, abs=1e-10)


def test_syk_is_byte_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run(capsys, "syk", "--N", "6", "--n-tau", "21", "--seed", "3", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    side = json.loads((tmp_path / "a.csv.config.json").read_text())
    assert side["seed"] == 3 and side["N"] == 6


def test_syk_default_exceeds_one(capsys):
    code, out, _ = run(capsys, "syk")
    assert code == 0
    p_tilde = [float(line.split(",")[1]) for line in out.splitlines()[1:]]
    assert max(p_tilde) > 1


def test_csv_uses_17_digits(capsys):
    _, out, _ = run(capsys, "wtable", "--n-max", "3")
    row = out.splitlines()[2].split(",")
    assert row[0] == "3"
    assert float(row[1]) == float(repr(float(row[1])))
    assert len(row[2].replace(".", "").lstrip("0")) == 17


def test_wtable(capsys):
    code, out, _ = run(capsys, "wtable", "--format", "json")
    assert code == 0
    cols = json.loads(out)["columns"]
    assert cols["N"] == list(range(2, 9))
    assert max(cols["abs_diff"]) <= 1e-9


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "all suites passed" in out


def test_verify_catches_sign_error(capsys, monkeypatch):
    original = advantage.commutation_matrix

    def flipped(*args, **kwargs):
        g = original(*args, **kwargs)
        return CommutationMatrix(-g.entries, float(np.linalg.eigvalsh(-g.entries)[-1]), g.top_vector)

    monkeypatch.setattr(advantage, "commutation_matrix", flipped)
    code, out, _ = run(capsys, "verify")
    assert code == 1
    assert "FAIL" in out and "seed" in out


def test_runtime_failures_exit_1(capsys, monkeypatch):
    from qbattery import cli
    from qbattery.errors import IntegrationUnstable

    def boom(cfg):
        raise IntegrationUnstable("negative eigenvalue")

    monkeypatch.setattr(cli, "integrate", boom)
    code, _, err = run(capsys, "thermalize", "--t-final", "0.01")
    assert code == 1
    assert "IntegrationUnstable" in err


def test_suite_reports_seed():
    res = checks.SuiteResult("x", 3, failures=[(1007, "bad")])
    assert not res.passed
    assert "seed 1007" in res.line()
