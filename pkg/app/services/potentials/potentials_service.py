import logging
from typing import Optional

from app.schemas.model_schema import ModelParams
from app.schemas.potential_schema import PotentialConfig
from app.services.billiard.raytrace import raytrace_collision_curve
from app.services.interface.energy import perturbation_for
from app.services.potentials.base import Potential
from app.services.potentials.billiard_potential import (
    BilliardPotential,
    BilliardSpec,
    RegularizedBilliard,
    universal_billiard,
)
from app.services.potentials.mollifier import Mollifier, MollifierKind
from app.services.potentials.perturbation import SolenoidalPerturbation
from app.services.potentials.smooth import decoupled_test_potential, quadratic_potential

logger = logging.getLogger(__name__)


class PotentialService:
    """
    Builds mixing potentials and perturbations from validated configuration blocks.
    """

    # -------------------------------------------------
    # BILLIARD SPEC
    # -------------------------------------------------
    def billiard_spec(self, config: Optional[PotentialConfig]) -> Optional[BilliardSpec]:
        if config is None:
            return None
        if config.kind == "universal":
            return universal_billiard(config.c, config.tip_rounding)
        if config.kind == "raytraced":
            return raytrace_collision_curve(
                config.c1,
                config.c2,
                arc_halfwidth=config.arc_halfwidth,
                arc_radius=config.arc_radius,
                R0=config.R0,
                b_plus=config.b_plus,
                b_minus=config.b_minus,
                simplex_size=config.simplex_size,
            )
        return None

    # -------------------------------------------------
    # MOLLIFIER
    # -------------------------------------------------
    def mollifier(self, config: Optional[PotentialConfig]) -> Mollifier:
        if config is None:
            return Mollifier()
        return Mollifier(MollifierKind(config.mollifier))

    # -------------------------------------------------
    # BUILD POTENTIAL
    # -------------------------------------------------
    def build(self, config: Optional[PotentialConfig]) -> Potential:
        if config is None:
            logger.info("no potential configured; using the decoupled test potential")
            return decoupled_test_potential()
        if config.kind == "decoupled":
            return decoupled_test_potential()
        if config.kind == "quadratic":
            return quadratic_potential(config.A)

        spec = self.billiard_spec(config)
        if config.delta is None:
            return BilliardPotential(spec)
        return RegularizedBilliard(spec, config.delta, self.mollifier(config))

    # -------------------------------------------------
    # PERTURBATION
    # -------------------------------------------------
    def perturbation(self, params: ModelParams, dim: int = 2) -> SolenoidalPerturbation:
        return perturbation_for(params, dim)
