"""Scenario validation and the command line contract: artifacts, exit
codes, and determinism."""

import json
import math

import pytest

from equiwave.cli import emit_closed_forms, main
from equiwave.errors import CFLViolation, ClosedFormMismatch, ScenarioError
from equiwave.scenario import Scenario, load_scenario

GOOD = {
    "name": "good",
    "manifold": {"kind": "hyperbolic"},
    "target": {"kind": "sphere"},
    "n": 3,
    "k": 1,
    "delta0": "search",
    "grid": {"R_max": 25.0, "N": 400},
    "time": {"T": 8.0, "dt_factor": 0.1, "snap_every": 1.0},
    "data": {"shape": "gaussian", "amplitude": 0.05, "width": 1.0, "center": 0.0},
    "checks": ["hardy", "dimshift"],
    "seed": 0,
}


def write_scenario(tmp_path, payload, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_load_good_scenario(tmp_path):
    s = load_scenario(write_scenario(tmp_path, GOOD))
    assert s.n == 3 and s.k == 1
    assert s.support_radius == 6.0
    assert s.profile().kind == "hyperbolic"


def test_defaults_applied(tmp_path):
    minimal = {"manifold": {"kind": "flat"}, "target": {"kind": "sphere"},
               "n": 3, "k": 1}
    s = load_scenario(write_scenario(tmp_path, minimal))
    assert s.seed == 0
    assert s.delta0 == "search"
    assert s.grid["N"] == 4000


@pytest.mark.parametrize(
    "patch,exc",
    [
        ({"n": 2}, ScenarioError),
        ({"k": 0}, ScenarioError),
        ({"delta0": 1.5}, ScenarioError),
        ({"checks": ["nosuch"]}, ScenarioError),
        ({"data": {"shape": "triangle"}}, ScenarioError),
        ({"time": {"T": 30.0, "dt_factor": 0.1, "snap_every": 1.0}}, ScenarioError),
        ({"time": {"T": 8.0, "dt_factor": 0.9, "snap_every": 1.0}}, CFLViolation),
        ({"manifold": {"kind": "nosuch"}}, ScenarioError),
    ],
)
def test_validation_rejects(tmp_path, patch, exc):
    payload = {**GOOD, **patch}
    with pytest.raises(exc):
        load_scenario(write_scenario(tmp_path, payload))


def test_unknown_field_rejected(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(write_scenario(tmp_path, {**GOOD, "extra": 1}))


def test_bad_json_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ScenarioError):
        load_scenario(path)


def test_initial_data_zero_shape():
    import numpy as np

    s = Scenario(**{**GOOD, "data": {"shape": "zero"}})
    f, v = s.initial_data(np.linspace(0.01, 1.0, 5))
    assert np.all(f == 0) and np.all(v == 0)


# -- CLI ---------------------------------------------------------------------------


def test_cli_verify_pass(tmp_path):
    path = write_scenario(tmp_path, GOOD)
    out = tmp_path / "out"
    assert main(["verify", "--scenario", str(path), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["verdict"] == "PASS"
    assert math.isclose(report["h_infinity"], 1.0, rel_tol=1e-8)


def test_cli_verify_fail_exit_1(tmp_path):
    payload = {**GOOD, "manifold": {"kind": "sin"}}
    path = write_scenario(tmp_path, payload)
    out = tmp_path / "out"
    assert main(["verify", "--scenario", str(path), "--out", str(out)]) == 1
    report = json.loads((out / "report.json").read_text())
    assert report["verdict"] == "FAIL"


def test_cli_config_error_exit_2(tmp_path):
    assert main(["verify", "--scenario", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path)]) == 2
    payload = {**GOOD, "time": {"T": 8.0, "dt_factor": 0.9, "snap_every": 1.0}}
    path = write_scenario(tmp_path, payload)
    assert main(["evolve", "--scenario", str(path), "--out", str(tmp_path)]) == 2


def test_cli_numerical_error_exit_3(tmp_path):
    # amplitude far outside the sphere target domain trips the cubic term
    payload = {**GOOD,
               "data": {"shape": "gaussian", "amplitude": 80.0, "width": 1.0,
                        "center": 0.0}}
    path = write_scenario(tmp_path, payload)
    assert main(["evolve", "--scenario", str(path), "--out", str(tmp_path)]) == 3


def test_cli_all_artifacts_and_determinism(tmp_path):
    payload = {**GOOD, "grid": {"R_max": 25.0, "N": 300},
               "checks": ["hardy", "smoothing", "strichartz", "dimshift"]}
    path = write_scenario(tmp_path, payload)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["all", "--scenario", str(path), "--out", str(out_a)]) == 0
    assert main(["all", "--scenario", str(path), "--out", str(out_b)]) == 0
    assert (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()
    for artifact in ("report.json", "trajectory.csv", "spectrum.csv",
                     "ratios_hardy.csv", "ratios_smoothing.csv",
                     "ratios_strichartz.csv", "ratios_dimshift.csv"):
        assert (out_a / artifact).exists(), artifact
    header = (out_a / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,energy,sup,h_half_norm,strichartz_partial"


def test_cli_seed_override_changes_families(tmp_path):
    path = write_scenario(tmp_path, GOOD)
    out_a, out_b = tmp_path / "sa", tmp_path / "sb"
    main(["estimates", "--scenario", str(path), "--out", str(out_a), "--seed", "1"])
    main(["estimates", "--scenario", str(path), "--out", str(out_b), "--seed", "2"])
    ra = (out_a / "ratios_hardy.csv").read_text()
    rb = (out_b / "ratios_hardy.csv").read_text()
    assert ra != rb


def test_closed_forms_pass():
    report = emit_closed_forms()
    assert report["verdict"] == "PASS"
    assert report["polynomial_n3_M1"]["Q"] == pytest.approx([2.0, 16.0, 14.0], abs=1e-8)
    assert report["polynomial_n4_M2"]["Q"] == pytest.approx([15.0, 90.0, 99.0], abs=1e-8)


def test_closed_forms_tolerance_guard():
    with pytest.raises(ClosedFormMismatch):
        emit_closed_forms(tol=-1.0)  # impossible tolerance must trip
