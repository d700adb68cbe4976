import logging
import time
from typing import Callable, Optional

from app.core.config import settings
from app.middleware.error_handler import handle_error

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """One stream handler on the root logger; repeated calls only change the level."""
    root = logging.getLogger()
    root.setLevel((level or settings.MFCH_LOG_LEVEL).upper())
    if not any(getattr(h, "_mfch", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._mfch = True
        root.addHandler(handler)


class CommandLoggingMiddleware:
    """
    Wraps a command handler: logs subcommand, exit status and elapsed time,
    and turns failures that escape the handler into exit codes.
    """

    def __init__(self, name: str, handler: Callable[..., int]):
        self.name = name
        self.handler = handler

    def __call__(self, args) -> int:
        start_time = time.perf_counter()
        try:
            code = self.handler(args)
        except Exception as exc:
            code = handle_error(exc)

        process_time = (time.perf_counter() - start_time) * 1000
        logger.info("[command] %s → %d (%.2f ms)", self.name, code, process_time)
        return code
