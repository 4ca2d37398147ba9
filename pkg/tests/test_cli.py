"""Command-line interface: reports, data files, exit codes."""

import csv
import json

import pytest

from monogeom.cli import RunConfig, main


def run(args):
    return main(args)


def test_verify_default_passes(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run(["verify", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["all_passed"] is True
    assert report["seed"] == 0
    ids = [c["id"] for c in report["checks"]]
    assert len(ids) == len(set(ids))
    for c in report["checks"]:
        assert set(c) == {"id", "anchor", "measured", "expected", "tolerance",
                          "passed", "runtime_ms"}


def test_verify_negative_control(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"break_dirac": True}))
    out = tmp_path / "report.json"
    assert run(["verify", "--config", str(cfg), "--only", "metric",
                "--out", str(out)]) == 1
    report = json.loads(out.read_text())
    failed = {c["id"] for c in report["checks"] if not c["passed"]}
    assert "metric.dirac-curvature" in failed


def test_verify_only_filter(tmp_path):
    out = tmp_path / "report.json"
    assert run(["verify", "--only", "symplectic", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert all(c["id"].startswith("symplectic") for c in report["checks"])
    assert run(["verify", "--only", "nonexistent", "--out", str(out)]) == 2


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["verify", "--only", "hyperbolic", "--out", str(a)]) == 0
    assert run(["verify", "--only", "hyperbolic", "--out", str(b)]) == 0
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    for ca, cb in zip(ra["checks"], rb["checks"]):
        assert ca["measured"] == cb["measured"]


def test_metric_csv(tmp_path):
    out = tmp_path / "grid.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"metric_grid": 2}))
    assert run(["metric", "--config", str(cfg), "--out", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "y", "z", "theta", "scalar", "ricci",
                       "weyl_sd", "weyl_asd", "step"]
    assert len(rows) - 1 <= 8
    for row in rows[1:]:
        assert abs(float(row[4])) < 1e-4   # scalar-flat gauge samples


def test_scatter_usage_error(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scatter_impacts": []}))
    assert run(["scatter", "--config", str(cfg)]) == 2


def test_scatter_abelian(tmp_path):
    out = tmp_path / "sc.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "scatter_impacts": [1e-4, 1e-3, 1e-2],
        "charges": [2],
    }))
    assert run(["scatter", "--config", str(cfg), "--out", str(out)]) == 0
    fit = json.loads((tmp_path / "sc.csv.fit.json").read_text())
    assert fit["expected_slope"] == 4.0  # doubled charge
    assert abs(fit["slope"] - 4.0) < 0.2
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 4


def test_spectral_json(tmp_path):
    out = tmp_path / "sp.json"
    assert run(["spectral", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["doubled_charges"] == [2]
    assert len(data["divisor"]) == 1
    assert data["divisor"][0]["multiplicity"] == 2
    assert data["product_residual"] < 1e-10
    assert data["phase_modulus"] == pytest.approx(1.0, abs=1e-12)
    assert data["supports_disjoint"] is True


def test_spectral_rejects_center_point(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"spectral_point": [0.3, -0.2, 1.4]}))
    assert run(["spectral", "--config", str(cfg)]) == 2


def test_symplectic_json(tmp_path):
    out = tmp_path / "sy.json"
    assert run(["symplectic", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["discrepancy"] < 1e-10
    assert len(data["inputs_sha256"]) == 64
    # deterministic under the recorded seed
    out2 = tmp_path / "sy2.json"
    assert run(["symplectic", "--out", str(out2)]) == 0
    assert json.loads(out2.read_text()) == data


def test_config_errors(tmp_path):
    missing = tmp_path / "missing.json"
    assert run(["verify", "--config", str(missing)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\"charges\": [0]}")
    assert run(["verify", "--config", str(bad)]) == 2
    unknown = tmp_path / "unknown.json"
    unknown.write_text("{\"no_such_key\": 1}")
    assert run(["verify", "--config", str(unknown)]) == 2


def test_runconfig_validation():
    with pytest.raises(ValueError):
        RunConfig.load(None, {"centers": [[0, 0, -1]]})
    with pytest.raises(ValueError):
        RunConfig.load(None, {"centers": [[0, 0, 1]], "charges": [1, 2]})
