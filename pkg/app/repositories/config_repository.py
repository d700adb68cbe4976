import hashlib
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from app.schemas.run_schema import RunConfig
from app.utils.exceptions import ConfigError

logger = logging.getLogger(__name__)


def _reject_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ValueError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _reject_constant(name):
    raise ValueError(f"non-standard JSON constant {name}")


def _line_of(text: str, loc: tuple) -> int:
    """Line of the last string key of an error location, searched in document order."""
    keys = [k for k in loc if isinstance(k, str)]
    line = 1
    start = 0
    for key in keys:
        pos = text.find(f'"{key}"', start)
        if pos < 0:
            break
        start = pos
        line = text.count("\n", 0, pos) + 1
    return line


class ConfigRepository:
    """
    Strict JSON run configurations: duplicate keys, NaN/Infinity and unknown
    fields are rejected with a file:line message.
    """

    # -------------------------------------------------
    # PARSE
    # -------------------------------------------------
    def parse(self, text: str, source: str = "<config>") -> RunConfig:
        try:
            raw = json.loads(text, object_pairs_hook=_reject_duplicates, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}", {"line": exc.lineno}) from exc
        except ValueError as exc:
            raise ConfigError(f"{source}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{source}:1: top level must be a JSON object")

        try:
            return RunConfig.model_validate(raw)
        except ValidationError as exc:
            first = exc.errors()[0]
            loc = tuple(first["loc"])
            field = ".".join(str(k) for k in loc)
            line = _line_of(text, loc)
            raise ConfigError(
                f"{source}:{line}: {field}: {first['msg']}",
                {"field": field, "line": line, "errors": len(exc.errors())},
            ) from exc

    # -------------------------------------------------
    # LOAD
    # -------------------------------------------------
    def load(self, path: Union[str, Path]) -> RunConfig:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
        config = self.parse(text, str(path))
        logger.info("loaded %s (hash %s)", path, self.config_hash(config)[:12])
        return config

    # -------------------------------------------------
    # HASH
    # -------------------------------------------------
    @staticmethod
    def resolved(config: RunConfig) -> dict:
        return config.model_dump(mode="json")

    def config_hash(self, config: RunConfig) -> str:
        canonical = json.dumps(self.resolved(config), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
