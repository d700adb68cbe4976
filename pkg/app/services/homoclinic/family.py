import logging
from typing import Optional

import numpy as np

from app.models.profile import FamilySweep
from app.services.homoclinic.collocation import CollocationSystem
from app.services.homoclinic.continuation import continue_delta
from app.services.homoclinic.solver import kernel_diagnostic
from app.services.potentials.billiard_potential import BilliardSpec, RegularizedBilliard
from app.services.potentials.mollifier import Mollifier
from app.utils.exceptions import NumericalError

logger = logging.getLogger(__name__)


def family_sweep(
    spec: BilliardSpec,
    delta: float,
    thetas,
    mollifier: Optional[Mollifier] = None,
    half_length: float = 6.0,
    nodes_per_delta: int = 40,
) -> FamilySweep:
    """
    Regularized homoclinics across exit angles with the two smallest singular
    values of each phase-conditioned Jacobian. Stops at the first angle where
    continuation is lost and returns the partial sweep.
    """
    thetas = [float(t) for t in thetas]
    done, profiles, sigmas = [], [], []
    failure = ""
    for theta in thetas:
        try:
            profile = continue_delta(
                spec, delta, exit_angle=float(theta), mollifier=mollifier,
                half_length=half_length, nodes_per_delta=nodes_per_delta,
            )
        except NumericalError as exc:
            failure = f"theta={float(theta):.6g}: {exc.message}"
            logger.warning("family sweep stopped at %s", failure)
            break

        pot = RegularizedBilliard(spec, delta, mollifier).lenient()
        system = CollocationSystem(pot, profile.z)
        sigma = kernel_diagnostic(system, profile.u, profile.drift, profile.du)
        done.append(float(theta))
        profiles.append(profile)
        sigmas.append(sigma.tolist())

    flags = [bool(np.isfinite(s[0]) and s[0] <= 1e-3 * s[1]) for s in sigmas]
    return FamilySweep(
        thetas=done,
        profiles=profiles,
        singular_values=sigmas,
        extra_kernel=flags,
        complete=len(done) == len(thetas),
        failure=failure,
    )
