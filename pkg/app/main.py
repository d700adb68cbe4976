import argparse
import os
import sys

from dotenv import load_dotenv

# -----------------------------
# SETTINGS
# -----------------------------
# thread caps must be exported before numpy is first imported
load_dotenv()
THREAD_VARS = ("OMP_NUM_THREADS", "MKL_NUM_THREADS", "OPENBLAS_NUM_THREADS")
for _var in THREAD_VARS:
    os.environ.setdefault(_var, os.environ.get("MFCH_THREADS", "1"))

from app.api.commands import (  # noqa: E402
    flow_commands,
    geoflow_commands,
    interface_commands,
    profile_commands,
    reproduce_commands,
    spectra_commands,
)
from app.middleware.logging_middleware import configure_logging  # noqa: E402

COMMAND_GROUPS = (
    profile_commands,
    spectra_commands,
    interface_commands,
    flow_commands,
    geoflow_commands,
    reproduce_commands,
)


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfch",
        description="Numerical lab for the multicomponent functionalized Cahn-Hilliard model",
    )
    parser.add_argument("--log-level", default=None, help="overrides MFCH_LOG_LEVEL")

    # -----------------------------
    # COMMANDS
    # -----------------------------
    subparsers = parser.add_subparsers(dest="command", required=True)
    for group in COMMAND_GROUPS:
        group.register(subparsers)
    return parser


def main(argv=None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)

    # -----------------------------
    # LOGGING
    # -----------------------------
    configure_logging(args.log_level)

    # -----------------------------
    # ERROR HANDLERS
    # -----------------------------
    # each handler is wrapped in CommandLoggingMiddleware, which maps failures to exit codes
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
