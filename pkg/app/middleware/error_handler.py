import logging
from pathlib import Path
from typing import Callable, Optional, Union

from pydantic import ValidationError

from app.models.interface import FieldState
from app.repositories.artifact_repository import dumps
from app.repositories.field_repository import FieldRepository
from app.utils.exceptions import BlowUpError, ConfigError, MfchError

logger = logging.getLogger(__name__)

ERROR_FILE = "error.json"

fields = FieldRepository()


def register_error_handlers() -> list[tuple[type, Callable[[Exception], tuple[int, dict]]]]:
    """
    Ordered (exception type, handler) table; the first matching entry wins.
    Each handler returns (exit code, error payload).
    """

    # -----------------------------------------
    # Configuration errors (JSON or schema)
    # -----------------------------------------
    def config_error(exc: ConfigError):
        return exc.exit_code, {"success": False, "message": exc.message, "type": "ConfigError", "details": exc.details}

    # -----------------------------------------
    # Schema errors raised outside the loader
    # -----------------------------------------
    def validation_error(exc: ValidationError):
        first = exc.errors()[0]
        field = ".".join(str(k) for k in first["loc"])
        return ConfigError.exit_code, {
            "success": False,
            "message": f"{field}: {first['msg']}",
            "type": "ConfigError",
            "details": {"field": field},
        }

    # -----------------------------------------
    # Numerical failures
    # -----------------------------------------
    def numerical_error(exc: MfchError):
        return exc.exit_code, {"success": False, "message": exc.message, "type": type(exc).__name__, "details": exc.details}

    # -----------------------------------------
    # Anything else
    # -----------------------------------------
    def unhandled(exc: Exception):
        return 1, {"success": False, "message": "Internal numerical failure", "type": type(exc).__name__, "details": {"error": str(exc)}}

    return [
        (ConfigError, config_error),
        (ValidationError, validation_error),
        (MfchError, numerical_error),
        (Exception, unhandled),
    ]


HANDLERS = register_error_handlers()


def handle_error(exc: Exception, run_dir: Optional[Union[str, Path]] = None) -> int:
    """Log the failure, write error.json (and the last stable field on blow-up) and return the exit code."""
    for kind, handler in HANDLERS:
        if isinstance(exc, kind):
            code, payload = handler(exc)
            break

    if isinstance(exc, (MfchError, ValidationError)):
        logger.error("%s: %s", payload["type"], payload["message"])
    else:
        logger.exception("unhandled failure")

    if run_dir is not None:
        run_dir = Path(run_dir)
        run_dir.mkdir(parents=True, exist_ok=True)
        if isinstance(exc, BlowUpError) and isinstance(exc.last_stable, FieldState):
            fields.write_snapshot(run_dir, "last_stable", exc.last_stable)
            payload["details"]["last_stable_time"] = exc.last_stable.time
        (run_dir / ERROR_FILE).write_text(dumps(payload), encoding="utf-8")
    return code
