import json

import pytest

from app.main import main
from app.repositories.artifact_repository import MANIFEST, ArtifactRepository

RADIAL = {
    "params": {"epsilon": 0.1},
    "potential": {"kind": "decoupled"},
    "geoflow": {
        "M1": 1.2,
        "M2": 6.0,
        "M": [6.0, 0.0],
        "radial": {"radii": [1.0, 0.8], "d": 3, "a0": 1.0, "t_end": 5.0, "samples": 11},
        "tau1": {"t_end": 50.0, "samples": 51},
    },
}


@pytest.fixture
def write_config(tmp_path):
    def write(payload, name="run.json"):
        path = tmp_path / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
        return str(path)

    return write


def run_dir(root, prefix: str):
    (found,) = [p for p in root.iterdir() if p.is_dir() and p.name.startswith(prefix)]
    return found


def read_manifest(directory) -> dict:
    return json.loads((directory / MANIFEST).read_text(encoding="utf-8"))


# -------------------------------------------------
# VALIDATE
# -------------------------------------------------
def test_validate_accepts_config(write_config):
    assert main(["--log-level", "WARNING", "validate", "--config", write_config(RADIAL)]) == 0


def test_validate_rejects_negative_epsilon(write_config):
    path = write_config({"params": {"epsilon": -0.1}})
    assert main(["validate", "--config", path]) == 2


def test_validate_missing_file(tmp_path):
    assert main(["validate", "--config", str(tmp_path / "absent.json")]) == 2


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        main(["transmogrify"])


# -------------------------------------------------
# GEOMETRIC FLOWS
# -------------------------------------------------
def test_willmore_radial_writes_artifacts(write_config, tmp_path):
    out = tmp_path / "runs"
    assert main(["willmore-radial", "--config", write_config(RADIAL), "--output", str(out)]) == 0

    directory = run_dir(out, "willmore-radial-")
    for name in ("radial.csv", "events.json", "stability.json", MANIFEST):
        assert (directory / name).is_file()

    manifest = read_manifest(directory)
    assert manifest["status"] == "ok"
    assert manifest["checks"]["verdict"] == "stable"
    assert manifest["checks"]["extinctions"] == 0
    assert manifest["config"]["geoflow"]["M1"] == 1.2
    assert {a["path"] for a in manifest["artifacts"]} == {"radial.csv", "events.json", "stability.json"}
    assert ArtifactRepository(directory).verify() == []


def test_tau1_command(write_config, tmp_path):
    out = tmp_path / "runs"
    assert main(["tau1", "--config", write_config(RADIAL), "--output", str(out)]) == 0

    manifest = read_manifest(run_dir(out, "tau1-"))
    assert manifest["checks"]["monotone"]
    assert manifest["checks"]["B1_vanishes"]


def test_repeated_runs_share_directory(write_config, tmp_path):
    out = tmp_path / "runs"
    path = write_config(RADIAL)
    assert main(["willmore-radial", "--config", path, "--output", str(out)]) == 0
    assert main(["willmore-radial", "--config", path, "--output", str(out)]) == 0
    assert len(list(out.iterdir())) == 1


# -------------------------------------------------
# FAILURES
# -------------------------------------------------
def test_numerical_failure_leaves_error_file(write_config, tmp_path):
    config = {"params": {"epsilon": 0.1}, "potential": {"kind": "quadratic", "A": [[1.0, 0.0], [0.0, 1.0]]}}
    out = tmp_path / "runs"
    assert main(["homoclinic", "--config", write_config(config), "--output", str(out)]) == 1

    directory = run_dir(out, "homoclinic-")
    error = json.loads((directory / "error.json").read_text(encoding="utf-8"))
    assert error["success"] is False
    assert error["type"] == "ParameterError"
    assert read_manifest(directory)["status"] == "failed"


def test_curve_breakdown_keeps_partial_trajectory(write_config, tmp_path):
    config = {
        "params": {"epsilon": 0.1},
        "geoflow": {
            "M1": 1.2,
            "M2": 6.0,
            "curve": {
                "curve": {"kind": "dumbbell", "a": 2.0, "b": 1.0, "neck": 0.15, "center": [0.0, 0.0]},
                "dt": 1e-6,
                "t_end": 1e-5,
                "l0": 0.1,
                "snapshot_every": 1,
            },
        },
    }
    out = tmp_path / "runs"
    assert main(["willmore-curve", "--config", write_config(config), "--output", str(out)]) == 1

    directory = run_dir(out, "willmore-curve-")
    error = json.loads((directory / "error.json").read_text(encoding="utf-8"))
    assert error["type"] == "GeometricBreakdownError"
    assert (directory / "curve.csv").is_file()
    assert read_manifest(directory)["status"] == "failed"


# -------------------------------------------------
# REPRODUCTION
# -------------------------------------------------
def test_reproduce_radii_figure(tmp_path):
    assert main(["reproduce", "radii-figure", "--output", str(tmp_path)]) == 0

    checks = read_manifest(run_dir(tmp_path, "reproduce-radii-figure-"))["checks"]
    assert checks["positive"]["spread"] < 1e-6
    assert checks["positive"]["verdicts_agree"]
    assert checks["negative"]["extinctions"] == 1
    assert checks["negative"]["verdict"] == "unstable"
