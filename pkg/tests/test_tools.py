import errno
import math

import pytest

from core.errors import ReportIOError, SchemaError
from tools import FockTool, GeometryTool, ModularTool, OneParticleTool, RayTool, report_io
from tools.report_io import dumps, read_json, write_csv, write_json
from tools.retry_utils import should_retry_io_error


def _names(result):
    return {v["name"] for v in result["verdicts"]}


def test_modular_analyze(pair_descriptor, theta):
    c = math.exp(-theta / 2.0)
    result = ModularTool().analyze(subspace=pair_descriptor, vector=[[c, 0.0], [1.0, 0.0]])
    assert result["success"]
    assert result["standard"]
    assert result["factorial"]
    assert result["entropy"] == pytest.approx(theta * (1 - math.exp(-theta)), abs=1e-10)
    assert all(v["passed"] for v in result["verdicts"])


def test_modular_analyze_non_standard():
    result = ModularTool().analyze(subspace={"ambient_dim": 2, "span": [[[1.0, 0.0], [0.0, 0.0]]]})
    assert result["success"]
    assert not result["standard"]
    assert result["reason"] == "H+iH not dense"
    assert "eigenvalues" not in result


def test_modular_analyze_rejects_bad_descriptor():
    result = ModularTool().analyze(subspace={"ambient_dim": 2, "span": [[[1.0, 0.0]]]})
    assert result["success"] is False
    assert "ValidationError" in result["error"]


def test_modular_suites_small():
    tool = ModularTool()
    assert tool.identity_suite(count=5, max_dim=4, seed=1)["passed"]
    assert tool.entropy_axioms(count=5, max_dim=4, seed=1)["passed"]
    assert tool.thermal_example(theta=0.7)["passed"]


def test_ray_profile_tool():
    result = RayTool().entropy_profile(packet={"type": "tent"}, grid=[0.0, 0.5, 1.0, 1.5, 2.0, 2.5])
    assert result["passed"]
    assert result["kinks"] == [0.0, 1.0, 2.0]
    assert result["rows"][0]["S"] == pytest.approx(2 * math.pi)


def test_ray_suites_small():
    tool = RayTool()
    assert tool.qnec_suite(count=4, grid_points=40, seed=2)["passed"]
    assert tool.representation_laws(count=4, seed=2)["passed"]


def test_representation_laws_cover_generator_form():
    result = RayTool().representation_laws(count=6, seed=3)
    assert result["passed"]
    assert "generator_form" in _names(result)
    assert result["max_generator_form_residual"] < 1e-10


def test_ray_packet_errors_are_reported():
    result = RayTool().entropy_profile(packet={"type": "hermite", "knots": [0.0, 1.0], "values": [0.0, 0.0]})
    assert result["success"] is False
    assert "derivs" in result["error"]


def test_one_particle_build_and_domination():
    tool = OneParticleTool()
    built = tool.build(omega=1.0, beta=1.0)
    assert built["passed"]
    assert built["rank"] == 2
    assert {"thermal_spectrum", "kms_flow_agreement"} <= _names(built)

    failed = tool.build(sigma=[[0.0, 1.0], [-1.0, 0.0]], mu=[[0.5, 0.0], [0.0, 0.5]])
    assert failed["success"] is False
    assert failed["error"].startswith("DominationViolated")
    assert failed["context"]["min_eigenvalue"] == pytest.approx(-0.5)


def test_one_particle_suite_small():
    tool = OneParticleTool()
    assert tool.thermal(omega=2.0, beta=0.5)["passed"]
    assert tool.axiom_suite(count=5, max_dim=4, seed=3)["passed"]


def test_fock_tools():
    tool = FockTool()
    verified = tool.verify(theta=1.0, cutoff=60)
    assert verified["passed"]
    assert len(verified["blocks"]) == 1
    assert tool.laws(count=2, seed=4)["passed"]


def test_geometry_sweep_tool():
    result = GeometryTool().sweep(
        region={"type": "deformed_wedge", "f": {"type": "quadratic", "coefficient": 0.25}},
        checks=["half_invariance", "causal_convexity"],
        n_samples=500,
        seed=5,
        **{"lambda": 0.5},
    )
    assert result["success"]
    assert [r["name"] for r in result["reports"]] == [
        "half_invariance:deformed_wedge",
        "causal_convexity:deformed_wedge",
    ]
    # curved deformations stay half-invariant but lose causal convexity
    assert result["reports"][0]["violations"] == 0
    assert result["reports"][1]["violations"] > 0
    assert result["passed"] is False


def test_geometry_sweep_tool_on_wedge():
    result = GeometryTool().sweep(
        region={"type": "wedge"}, checks=["half_invariance", "causal_convexity"], n_samples=500, seed=5
    )
    assert result["passed"]
    assert all(r["violations"] == 0 for r in result["reports"])


def test_geometry_sweep_rejects_unknown_check():
    result = GeometryTool().sweep(checks=["teleport"], n_samples=10, seed=1)
    assert result["success"] is False


def test_determinism_probe():
    result = GeometryTool().determinism_probe(seed=6, n_samples=2000, worker_counts=(1, 3))
    assert result["identical"]
    assert result["passed"]


def test_report_io_round_trip(tmp_path):
    path = write_json(tmp_path / "out" / "report.json", {"b": 1, "a": [1.5]})
    assert read_json(path) == {"a": [1.5], "b": 1}
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')

    rows = [{"lambda": 0.5, "S": 1.25}]
    csv_path = write_csv(tmp_path / "rows.csv", rows, ["lambda", "S"])
    assert csv_path.read_text().splitlines() == ["lambda,S", "0.5,1.25"]


def test_transient_io_errors_are_retried():
    assert should_retry_io_error(OSError(errno.EBUSY, "busy"))
    assert not should_retry_io_error(OSError(errno.ENOSPC, "full"))
    assert not should_retry_io_error(PermissionError(errno.EACCES, "denied"))
    assert not should_retry_io_error(ValueError("not io"))


def test_write_text_retries_then_succeeds(tmp_path, monkeypatch):
    calls = []
    original = report_io._atomic_write

    def flaky(path, text):
        calls.append(path)
        if len(calls) == 1:
            raise OSError(errno.EAGAIN, "try again")
        original(path, text)

    monkeypatch.setattr(report_io, "_atomic_write", flaky)
    path = report_io.write_text(tmp_path / "retry.txt", "ok")
    assert path.read_text() == "ok"
    assert len(calls) == 2


def test_write_text_gives_up_on_permanent_errors(tmp_path, monkeypatch):
    def broken(path, text):
        raise IsADirectoryError(errno.EISDIR, "is a directory")

    monkeypatch.setattr(report_io, "_atomic_write", broken)
    with pytest.raises(ReportIOError):
        report_io.write_text(tmp_path / "dir", "x")


def test_read_json_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        read_json(bad)
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(SchemaError):
        read_json(listing)
