import logging
from dataclasses import dataclass

import numpy as np

from app.models.base import Base
from app.models.billiard import BilliardHomoclinic
from app.services.billiard.tracer import trace_homoclinic
from app.services.potentials.billiard_potential import BilliardSpec
from app.utils.exceptions import NumericalError

logger = logging.getLogger(__name__)

RESOLUTION = 1e-10


@dataclass(frozen=True, eq=False)
class TransversalityReport(Base):
    verdict: str  # transversal | degenerate | inconclusive | non-homoclinic
    etas: list
    misses: list
    exponent: float


def verify_transversality_proxy(
    orbit: BilliardHomoclinic,
    spec: BilliardSpec,
    etas=(1e-3, 1e-4),
) -> TransversalityReport:
    """
    Perturb the exit angle by +-eta and measure how far the return ray
    misses the origin. Linear scaling of the miss in eta indicates a
    transversal homoclinic; misses below resolution indicate a family.
    """
    if not orbit.is_homoclinic:
        return TransversalityReport("non-homoclinic", list(etas), [], float("nan"))

    n = orbit.n_collisions
    misses = []
    for eta in etas:
        values = []
        for sign in (1.0, -1.0):
            try:
                perturbed = trace_homoclinic(spec, orbit.exit_angle + sign * eta, max_collisions=n + 2)
            except NumericalError as exc:
                logger.debug("perturbed trace failed: %s", exc)
                continue
            if perturbed.reason in ("homoclinic", "missed origin"):
                values.append(perturbed.return_miss)
        misses.append(float(np.mean(values)) if values else float("nan"))

    misses_arr = np.array(misses)
    if np.all(np.isfinite(misses_arr)) and np.all(misses_arr < RESOLUTION):
        return TransversalityReport("degenerate", list(etas), misses, float("nan"))
    if not np.all(np.isfinite(misses_arr)) or np.any(misses_arr <= 0):
        return TransversalityReport("inconclusive", list(etas), misses, float("nan"))

    exponent = float(np.polyfit(np.log(etas), np.log(misses_arr), 1)[0])
    verdict = "transversal" if 0.8 <= exponent <= 1.2 else "degenerate"
    return TransversalityReport(verdict, list(etas), misses, exponent)
