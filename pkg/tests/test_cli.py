import json
import subprocess
import sys

import pytest

from lcflab import __version__
from lcflab.cli import RunConfig, UsageError, main, parse_config

PRODUCT = {"kind": "product", "params": {"factors": [
    {"kind": "space_form", "dim": 2, "params": {"K": 1}},
    {"kind": "space_form", "dim": 2, "params": {"K": -1}},
]}}


@pytest.fixture
def spec_file(tmp_path):
    path = tmp_path / "prod.json"
    path.write_text(json.dumps(PRODUCT), encoding="utf-8")
    return str(path)


def run_json(argv, capsys):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_parse_config_defaults_and_flags():
    cfg = parse_config(["classify", "--dim", "7", "--out", "r.json"])
    assert (cfg.command, cfg.dim, cfg.out) == ("classify", 7, "r.json")
    cfg = parse_config(["cspace-scan", "--spec", "prod.json", "--seed", "42"])
    assert (cfg.tol, cfg.h, cfg.steps, cfg.geodesics, cfg.seed) == (1e-5, 0.01, 100, 20, 42)


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"spec": "a.json", "steps": 50, "seed": 3}), encoding="utf-8")
    cfg = parse_config(["cspace-scan", "--config", str(path), "--seed", "9"])
    assert (cfg.spec, cfg.steps, cfg.seed) == ("a.json", 50, 9)
    path.write_text(json.dumps({"spec": "a.json", "colour": 1}), encoding="utf-8")
    with pytest.raises(UsageError, match="colour"):
        parse_config(["cspace-scan", "--config", str(path)])


def test_validation():
    for argv in (["classify"], ["classify", "--dim", "3"], ["ricci-scan"],
                 ["ricci-scan", "--spec", "x", "--tol", "0"], ["calibrate", "--seed", "-1"]):
        with pytest.raises(UsageError):
            parse_config(argv)
    with pytest.raises(UsageError):
        RunConfig("cspace-scan", spec="x", steps=0).validate()


def test_usage_errors_exit_2(capsys, tmp_path):
    assert main(["classify"]) == 2
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "space_form", "dim": 4, "params": {"K": 1, "bogus": 2}}))
    assert main(["check-metric", "--spec", str(bad)]) == 2
    assert "params.bogus" in capsys.readouterr().err
    assert main(["check-metric", "--spec", str(tmp_path / "missing.json")]) == 2


def test_classify_command(capsys, tmp_path):
    code, report = run_json(["classify", "--dim", "4"], capsys)
    assert code == 0
    res = report["result"]
    assert [a["m"] for a in res["admitted"]] == [[4], [3, 1], [2, 2]]
    assert res["undecided"] == []
    assert res["summary"]["matches_classification"] is True
    assert report["tool"] == "lcflab" and report["version"] == __version__
    assert report["seed"] == 0 and report["tolerances"]["tol"] == 1e-5
    out = tmp_path / "r.json"
    assert main(["classify", "--dim", "9", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["result"]["undecided"]) == 2


def test_check_metric_product(capsys, spec_file):
    code, report = run_json(["check-metric", "--spec", spec_file, "--points", "3"], capsys)
    res = report["result"]
    assert code == 0
    assert res["weyl_max"] < 1e-8 and res["codazzi_max"] < 1e-4
    assert res["weyl_vanishes"] and res["codazzi_holds"]
    for s in res["samples"]:
        assert s["ricci_eigenvalues"] == pytest.approx([-1, -1, 1, 1], abs=1e-6)


def test_scans_record_seed(capsys, spec_file):
    code, report = run_json(["cspace-scan", "--spec", spec_file, "--seed", "42",
                             "--geodesics", "2", "--steps", "10"], capsys)
    assert code == 0
    assert report["seed"] == 42 and report["result"]["seed"] == 42
    assert report["result"]["verdict"] == "constant"
    code, report = run_json(["ricci-scan", "--spec", spec_file, "--points", "4"], capsys)
    assert report["result"]["deviation"] < 1e-5


def test_guard_problems_are_reported_not_raised(capsys, tmp_path):
    path = tmp_path / "h.json"
    path.write_text(json.dumps({"kind": "space_form", "dim": 2, "params": {"K": -1}}))
    code, report = run_json(["cspace-scan", "--spec", str(path), "--h", "1.5", "--steps", "5",
                             "--geodesics", "1"], capsys)
    assert code == 0
    res = report["result"]
    assert "error" in res or any(s["exited_guard"] for s in res["samples"])


def test_calibrate(capsys, tmp_path):
    out = tmp_path / "cal.json"
    assert main(["calibrate", "--out", str(out)]) == 0
    table = capsys.readouterr().out
    assert "FAIL" not in table and table.count("PASS") >= 10
    assert json.loads(out.read_text())["result"]["passed"] is True


def test_console_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "lcflab.cli", "classify", "--dim", "5", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["result"]["summary"]["undecided"] == 0
