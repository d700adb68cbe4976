import json

import numpy as np
import pandas as pd
import pytest

from app.models.interface import FieldState
from app.repositories.artifact_repository import MANIFEST, ArtifactRepository
from app.repositories.config_repository import ConfigRepository
from app.repositories.field_repository import FieldRepository
from app.schemas.model_schema import ModelParams
from app.utils.exceptions import ConfigError, InvalidStateError

PARAMS = ModelParams(epsilon=0.1)


@pytest.fixture
def repo():
    return ConfigRepository()


# -------------------------------------------------
# CONFIGURATION PARSING
# -------------------------------------------------
def test_parse_minimal_config(repo):
    config = repo.parse('{"params": {"epsilon": 0.1}}')
    assert config.params.epsilon == 0.1
    assert config.potential is None


def test_duplicate_keys_rejected(repo):
    with pytest.raises(ConfigError, match="duplicate key 'epsilon'"):
        repo.parse('{"params": {"epsilon": 0.1, "epsilon": 0.2}}')


@pytest.mark.parametrize("constant", ["NaN", "Infinity", "-Infinity"])
def test_non_standard_constants_rejected(repo, constant):
    with pytest.raises(ConfigError, match="non-standard JSON constant"):
        repo.parse(f'{{"params": {{"epsilon": {constant}}}}}')


def test_schema_error_names_line_and_field(repo):
    text = '{\n  "params": {\n    "epsilon": -0.1\n  }\n}\n'
    with pytest.raises(ConfigError) as info:
        repo.parse(text, "run.json")
    assert info.value.message.startswith("run.json:3: params.epsilon")
    assert info.value.details["line"] == 3
    assert info.value.exit_code == 2


def test_unknown_field_rejected(repo):
    with pytest.raises(ConfigError) as info:
        repo.parse('{"params": {"epsilon": 0.1},\n "bogus": 1}')
    assert info.value.details["field"] == "bogus"
    assert info.value.details["line"] == 2


@pytest.mark.parametrize("text", ['{"params": ', "[1, 2]"])
def test_malformed_documents_rejected(repo, text):
    with pytest.raises(ConfigError):
        repo.parse(text)


def test_missing_file(repo, tmp_path):
    with pytest.raises(ConfigError, match="cannot read config"):
        repo.load(tmp_path / "absent.json")


def test_config_hash_tracks_content(repo):
    a = repo.parse('{"params": {"epsilon": 0.1}}')
    b = repo.parse('{ "params" : { "epsilon" : 0.1 } }')
    c = repo.parse('{"params": {"epsilon": 0.2}}')

    assert repo.config_hash(a) == repo.config_hash(b)
    assert repo.config_hash(a) != repo.config_hash(c)
    assert len(repo.config_hash(a)) == 64


# -------------------------------------------------
# FIELD FILES
# -------------------------------------------------
def test_field_file_round_trip(tmp_path):
    u = np.random.default_rng(0).standard_normal((2, 6, 4))
    state = FieldState(u=u, lengths=(3.0, 2.0), params=PARAMS, time=0.5)
    store = FieldRepository()
    path = store.write(tmp_path / "u.mfch", state)

    blob = path.read_bytes()
    assert blob[:4] == b"MFCH"
    assert len(blob) == 4 + 12 + 8 + 16 + 8 * u.size

    back = store.read(path, PARAMS, time=0.5)
    assert back.shape == (6, 4)
    assert back.lengths == (3.0, 2.0)
    assert np.array_equal(back.u, u)


def test_field_file_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.mfch"
    path.write_bytes(b"NOPE" + bytes(32))
    with pytest.raises(InvalidStateError):
        FieldRepository().read(path, PARAMS)


def test_field_file_rejects_truncated_payload(tmp_path):
    store = FieldRepository()
    path = store.write(tmp_path / "u.mfch", FieldState(u=np.zeros((2, 4, 4)), lengths=(1.0, 1.0), params=PARAMS))
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(InvalidStateError, match="payload"):
        store.read(path, PARAMS)


def test_pgm_header_and_scaling(tmp_path):
    image = np.arange(12, dtype=float).reshape(4, 3)
    blob = FieldRepository().write_pgm(tmp_path / "u.pgm", image).read_bytes()

    header = b"P5\n4 3\n255\n"
    assert blob.startswith(header)
    pixels = np.frombuffer(blob[len(header):], dtype=np.uint8)
    assert pixels.size == 12
    assert pixels.min() == 0 and pixels.max() == 255


def test_snapshot_writes_one_image_per_component(tmp_path):
    state = FieldState(u=np.zeros((2, 8, 8)), lengths=(1.0, 1.0), params=PARAMS)
    paths = FieldRepository().write_snapshot(tmp_path / "snap", "t0", state)
    assert [p.name for p in paths] == ["t0.mfch", "t0_u1.pgm", "t0_u2.pgm"]


# -------------------------------------------------
# ARTIFACTS AND MANIFEST
# -------------------------------------------------
def test_manifest_lists_and_verifies_artifacts(tmp_path):
    store = ArtifactRepository(tmp_path / "run")
    store.write_csv("table.csv", {"t": [0.0, 0.1], "energy": [1.0, 0.5]})
    store.write_json("summary.json", {"value": np.float64(1.5), "flags": np.array([1, 2])})
    store.write_manifest(None, {"ok": True}, wall_time=0.25)

    manifest = json.loads((store.run_dir / MANIFEST).read_text(encoding="utf-8"))
    assert manifest["status"] == "ok"
    assert manifest["config"] is None
    assert manifest["checks"] == {"ok": True}
    assert [a["path"] for a in manifest["artifacts"]] == ["summary.json", "table.csv"]
    assert "numpy" in manifest["versions"]
    assert store.verify() == []

    (store.run_dir / "table.csv").write_text("tampered\n", encoding="utf-8")
    assert store.verify() == ["table.csv"]


def test_csv_keeps_full_precision(tmp_path):
    store = ArtifactRepository(tmp_path)
    path = store.write_csv("x.csv", {"x": [1.0 / 3.0]})
    assert pd.read_csv(path, float_precision="round_trip")["x"][0] == 1.0 / 3.0


def test_run_directory_is_named_by_config(repo, tmp_path):
    config = repo.parse('{"params": {"epsilon": 0.1}}')
    store = ArtifactRepository.for_run(tmp_path, "willmore radial", config)
    assert store.run_dir.name == f"willmore-radial-{repo.config_hash(config)[:12]}"
    assert store.run_dir.is_dir()
