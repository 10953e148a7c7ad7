import json

import pytest

from config import get_settings
from main import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _write(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def test_entropy_profile_writes_csv_and_json(workdir):
    tent = _write(workdir / "tent.json", {"type": "tent"})
    out = workdir / "out.csv"
    code = main(["entropy-profile", "--input", tent, "--output", str(out), "--grid", "0,0.5,1,1.5,2,2.5"])
    assert code == EXIT_PASS
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda,S,dS,d2S,convexity_margin"
    assert len(lines) == 7
    report = json.loads((workdir / "out.json").read_text())
    assert report["passed"] is True
    assert report["command"] == "entropy-profile"


def test_tolerance_override_is_echoed_and_restored(workdir, pair_descriptor):
    source = _write(workdir / "pair.json", pair_descriptor)
    out = workdir / "pair_report.json"
    assert main(["modular", "--input", source, "--output", str(out), "--tol", "1e-9"]) == EXIT_PASS
    report = json.loads(out.read_text())
    assert report["config"]["settings"]["algebraic_tol"] == 1e-9
    assert get_settings().algebraic_tol == 1e-10


def test_sampling_command_needs_seed(workdir, capsys):
    assert main(["geometry-sweep"]) == EXIT_USAGE
    assert "SchemaError" in capsys.readouterr().err


def test_malformed_input_is_a_usage_error(workdir):
    bad = workdir / "bad.json"
    bad.write_text("{oops")
    assert main(["modular", "--input", str(bad)]) == EXIT_USAGE


def test_missing_input_is_a_usage_error(workdir):
    assert main(["modular", "--input", str(workdir / "absent.json")]) == EXIT_USAGE


def test_failed_verdict_exit_code(workdir):
    source = _write(workdir / "bad_pair.json", {"sigma": [[0.0, 1.0], [-1.0, 0.0]], "mu": [[0.5, 0.0], [0.0, 0.5]]})
    out = workdir / "one_particle.json"
    assert main(["one-particle", "--input", source, "--output", str(out)]) == EXIT_FAIL
    report = json.loads(out.read_text())
    assert report["passed"] is False


def test_unknown_command_rejected(workdir):
    with pytest.raises(SystemExit):
        main(["teleport"])
