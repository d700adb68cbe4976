import logging
import time
from typing import Callable, Optional

import numpy as np

from app.core.config import settings
from app.middleware.error_handler import handle_error
from app.middleware.logging_middleware import CommandLoggingMiddleware
from app.models.profile import HomoclinicProfile
from app.repositories.artifact_repository import ArtifactRepository
from app.repositories.config_repository import ConfigRepository
from app.schemas.run_schema import RunConfig
from app.services.homoclinic.homoclinic_service import HomoclinicService
from app.services.potentials.base import Potential
from app.services.potentials.potentials_service import PotentialService

logger = logging.getLogger(__name__)

configs = ConfigRepository()
potentials = PotentialService()
homoclinics = HomoclinicService()

Body = Callable[[RunConfig, ArtifactRepository], Optional[dict]]


# -------------------------------------------------
# PARSER HELPERS
# -------------------------------------------------
def add_command(subparsers, name: str, handler: Callable, help: str, config_required: bool = True):
    parser = subparsers.add_parser(name, help=help)
    parser.add_argument("--config", required=config_required, help="JSON run configuration")
    parser.add_argument("--output", default=None, help="output directory (overrides the config)")
    parser.set_defaults(handler=CommandLoggingMiddleware(name, handler))
    return parser


# -------------------------------------------------
# RUN A COMMAND BODY
# -------------------------------------------------
def execute(args, subcommand: str, body: Body, config: Optional[RunConfig] = None) -> int:
    """
    Load the config, open the run directory, run `body` and write the manifest.
    Failures inside the body leave error.json and a failed manifest behind.
    """
    config = config or configs.load(args.config)
    output = args.output or config.output_dir or settings.MFCH_OUTPUT_DIR
    store = ArtifactRepository.for_run(output, subcommand, config)
    start = time.perf_counter()
    try:
        checks = body(config, store) or {}
    except Exception as exc:
        code = handle_error(exc, store.run_dir)
        store.write_manifest(config, {}, time.perf_counter() - start, status="failed")
        return code

    store.write_manifest(config, checks, time.perf_counter() - start)
    logger.info("%s artifacts in %s", subcommand, store.run_dir)
    return 0


# -------------------------------------------------
# SHARED STAGES
# -------------------------------------------------
def profile_table(profile: HomoclinicProfile) -> dict:
    table = {"z": profile.z}
    for i in range(profile.dim):
        table[f"u{i + 1}"] = profile.u[i]
    for i in range(profile.dim):
        table[f"du{i + 1}"] = profile.du[i]
    return table


def prepare_profile(config: RunConfig) -> tuple[Potential, HomoclinicProfile, HomoclinicProfile]:
    """(potential, unperturbed profile, profile used for dressing)."""
    pot = potentials.build(config.potential)
    profile0 = homoclinics.solve(config, pot)
    profile = homoclinics.continued(config, pot, profile0) if config.profile.continue_epsilon else profile0
    return pot, profile0, profile


def series_columns(prefix: str, values) -> dict:
    values = np.atleast_2d(np.asarray(values, dtype=float))
    return {f"{prefix}{i + 1}": values[:, i] for i in range(values.shape[1])}
