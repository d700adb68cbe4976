import hashlib
import json
import logging
import platform
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
import scipy

from app.models.interface import FieldState
from app.repositories.config_repository import ConfigRepository
from app.repositories.field_repository import FieldRepository
from app.schemas.run_schema import RunConfig

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
MANIFEST = "manifest.json"
PACKAGE = "mfch-lab"

configs = ConfigRepository()
fields = FieldRepository()


def _to_json(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_to_json) + "\n"


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def package_versions() -> dict:
    try:
        own = version(PACKAGE)
    except PackageNotFoundError:
        own = "unknown"
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        PACKAGE: own,
    }


class ArtifactRepository:
    """
    One run directory: CSV tables, JSON documents, fields and the manifest.
    """

    def __init__(self, run_dir: Union[str, Path]):
        self.run_dir = Path(run_dir)
        self.run_dir.mkdir(parents=True, exist_ok=True)

    # -------------------------------------------------
    # RUN DIRECTORY
    # -------------------------------------------------
    @classmethod
    def for_run(cls, output_dir: Union[str, Path], subcommand: str, config: RunConfig) -> "ArtifactRepository":
        tag = configs.config_hash(config)[:12]
        return cls(Path(output_dir) / f"{subcommand.replace(' ', '-')}-{tag}")

    def path(self, name: str) -> Path:
        target = self.run_dir / name
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    # -------------------------------------------------
    # WRITERS
    # -------------------------------------------------
    def write_csv(self, name: str, table: Union[pd.DataFrame, dict]) -> Path:
        frame = table if isinstance(table, pd.DataFrame) else pd.DataFrame(table)
        target = self.path(name)
        frame.to_csv(target, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return target

    def write_json(self, name: str, payload) -> Path:
        target = self.path(name)
        target.write_text(dumps(payload), encoding="utf-8")
        return target

    def write_field(self, stem: str, state: FieldState, subdir: str = "") -> list[Path]:
        return fields.write_snapshot(self.run_dir / subdir, stem, state)

    # -------------------------------------------------
    # MANIFEST
    # -------------------------------------------------
    def files(self) -> list[Path]:
        return sorted(p for p in self.run_dir.rglob("*") if p.is_file() and p.name != MANIFEST)

    def write_manifest(
        self,
        config: Optional[RunConfig],
        checks: Optional[dict] = None,
        wall_time: float = 0.0,
        status: str = "ok",
    ) -> Path:
        """Every file in the run directory with its SHA-256, the resolved config and the check summary."""
        artifacts = [
            {"path": p.relative_to(self.run_dir).as_posix(), "sha256": sha256_of(p), "bytes": p.stat().st_size}
            for p in self.files()
        ]
        manifest = {
            "status": status,
            "config": configs.resolved(config) if config is not None else None,
            "config_hash": configs.config_hash(config) if config is not None else None,
            "versions": package_versions(),
            "wall_time_s": wall_time,
            "artifacts": artifacts,
            "checks": checks or {},
        }
        logger.info("manifest: %d artifacts in %s", len(artifacts), self.run_dir)
        return self.write_json(MANIFEST, manifest)

    def verify(self) -> list[str]:
        """Paths whose checksum no longer matches the manifest, or that are missing."""
        manifest = json.loads((self.run_dir / MANIFEST).read_text(encoding="utf-8"))
        bad = []
        for entry in manifest["artifacts"]:
            p = self.run_dir / entry["path"]
            if not p.is_file() or sha256_of(p) != entry["sha256"]:
                bad.append(entry["path"])
        return bad
