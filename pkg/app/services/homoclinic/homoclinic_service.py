import logging
from typing import Optional

import numpy as np

from app.models.profile import CorrectorPair, FamilySweep, HomoclinicProfile
from app.schemas.run_schema import RunConfig
from app.services.homoclinic.continuation import continue_delta, continue_epsilon
from app.services.homoclinic.correctors import correctors
from app.services.homoclinic.family import family_sweep
from app.services.homoclinic.melnikov import melnikov_a0
from app.services.homoclinic.solver import (
    default_half_length,
    evenness_defect,
    hamiltonian_residual,
    moment_first,
    solve_homoclinic,
)
from app.services.potentials.base import Potential
from app.services.potentials.billiard_potential import BilliardPotential, RegularizedBilliard
from app.services.potentials.potentials_service import PotentialService
from app.services.potentials.smooth import SmoothPotential
from app.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

DEFAULT_SMOOTH_NODES = 4001

potentials = PotentialService()


def bump_guess(pot: SmoothPotential, L: float, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """sech^2 bump along the softest direction of Hess W(0)."""
    vals, vecs = np.linalg.eigh(pot.hessian(np.zeros(pot.dim)))
    direction = vecs[:, 0] * np.sign(vecs[np.argmax(np.abs(vecs[:, 0])), 0])
    z = np.linspace(-L, L, n_nodes)
    width = 2.0 / np.sqrt(vals[0])
    return z, direction[:, None] * np.cosh(z / width)[None, :] ** -2


class HomoclinicService:
    """
    Profile solves, continuations and correctors for one run configuration.
    """

    # -------------------------------------------------
    # SOLVE
    # -------------------------------------------------
    def solve(self, config: RunConfig, pot: Potential) -> HomoclinicProfile:
        prof = config.profile
        tol = config.tolerances

        if isinstance(pot, RegularizedBilliard):
            return continue_delta(
                pot.spec,
                pot.delta,
                exit_angle=prof.exit_angle,
                mollifier=pot.mollifier,
                half_length=prof.half_length or 6.0,
                nodes_per_delta=prof.nodes_per_delta,
                max_collisions=prof.max_collisions,
                tol=tol.newton_tol,
                check_kernel=prof.check_kernel,
            )
        if isinstance(pot, BilliardPotential):
            raise ParameterError("homoclinic solves need a smoothing width delta for billiard potentials")
        if config.potential is not None and config.potential.kind == "quadratic":
            raise ParameterError("a quadratic potential has no orbit homoclinic to the origin")

        L = prof.half_length or default_half_length(pot)
        n_nodes = prof.n_nodes or DEFAULT_SMOOTH_NODES
        return solve_homoclinic(
            pot,
            bump_guess(pot, L, n_nodes),
            L=L,
            n_nodes=n_nodes,
            tol=tol.newton_tol,
            maxiter=tol.newton_maxiter,
            richardson=prof.richardson,
            check_kernel=prof.check_kernel,
        )

    # -------------------------------------------------
    # EPSILON CONTINUATION
    # -------------------------------------------------
    def continued(self, config: RunConfig, pot: Potential, profile0: HomoclinicProfile, epsilon: Optional[float] = None) -> HomoclinicProfile:
        params = config.params
        V = potentials.perturbation(params, pot.dim)
        return continue_epsilon(
            profile0,
            pot,
            V,
            params.m_vector,
            params.epsilon if epsilon is None else epsilon,
            tol=config.tolerances.newton_tol,
            maxiter=config.tolerances.newton_maxiter,
        )

    # -------------------------------------------------
    # CORRECTORS
    # -------------------------------------------------
    def correctors(self, config: RunConfig, pot: Potential, profile0: HomoclinicProfile) -> CorrectorPair:
        params = config.params
        V = potentials.perturbation(params, pot.dim)
        return correctors(profile0, pot, V, params.m_vector, params.eta1, params.eta2)

    # -------------------------------------------------
    # FAMILY SWEEP
    # -------------------------------------------------
    def sweep(self, config: RunConfig, pot: Potential) -> Optional[FamilySweep]:
        thetas = config.profile.sweep_thetas
        if not thetas:
            return None
        if not isinstance(pot, RegularizedBilliard):
            raise ParameterError("exit-angle sweeps need a regularized billiard potential")
        return family_sweep(
            pot.spec, pot.delta, thetas,
            mollifier=pot.mollifier,
            half_length=config.profile.half_length or 6.0,
            nodes_per_delta=config.profile.nodes_per_delta,
        )

    # -------------------------------------------------
    # SUMMARY
    # -------------------------------------------------
    def summary(self, config: RunConfig, pot: Potential, profile: HomoclinicProfile) -> dict:
        V = potentials.perturbation(config.params, pot.dim)
        out = profile.to_dict()
        out.update(
            {
                "melnikov_a0": melnikov_a0(profile, V),
                "hamiltonian_residual": hamiltonian_residual(profile, pot),
                "evenness_defect": evenness_defect(profile),
                "first_moment": moment_first(profile).tolist(),
            }
        )
        return out
