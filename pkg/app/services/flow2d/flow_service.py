import logging
from typing import Optional

from app.models.flow import FlowRun, PearlingRun
from app.models.interface import FieldState
from app.models.profile import HomoclinicProfile
from app.schemas.run_schema import RunConfig
from app.services.flow2d.pearling import pearling_experiment, seeded_interface
from app.services.flow2d.scheme import run_flow
from app.services.interface.dressing import dress
from app.services.interface.energy import perturbation_for
from app.services.potentials.base import Potential

logger = logging.getLogger(__name__)

MASS_TOL_PER_1000_STEPS = 1e-10


class FlowService:
    """
    Gradient-flow runs and the pearling experiment.
    """

    # -------------------------------------------------
    # INITIAL STATE
    # -------------------------------------------------
    def initial_state(self, config: RunConfig, profile: HomoclinicProfile) -> FieldState:
        iface = config.interface
        geom = seeded_interface(config)
        return dress(geom, profile, config.params, tuple(iface.lengths), tuple(iface.shape), iface.l0)

    # -------------------------------------------------
    # FLOW
    # -------------------------------------------------
    def flow(self, config: RunConfig, pot: Potential, profile: HomoclinicProfile, max_steps: Optional[int] = None) -> FlowRun:
        state = self.initial_state(config, profile)
        V = perturbation_for(config.params, state.N)
        return run_flow(state, config.flow, pot, V, max_steps=max_steps)

    # -------------------------------------------------
    # PEARLING
    # -------------------------------------------------
    def pearling(
        self,
        config: RunConfig,
        pot: Potential,
        profile: HomoclinicProfile,
        predicted_modes=(),
        max_steps: Optional[int] = None,
        profile0: Optional[HomoclinicProfile] = None,
    ) -> dict[str, PearlingRun]:
        runs = {}
        for offset in config.pearling.offsets:
            runs[offset] = pearling_experiment(
                offset, config, profile, pot,
                max_steps=max_steps,
                predicted_modes=predicted_modes,
                profile0=profile0,
            )
        return runs

    # -------------------------------------------------
    # CHECKS
    # -------------------------------------------------
    def checks(self, run: FlowRun, energy_tol: float) -> dict:
        diag = run.diagnostics
        tol = MASS_TOL_PER_1000_STEPS * max(1.0, run.steps / 1000.0)
        return {
            "mass_drift": diag.mass_drift(),
            "mass_conserved": bool(diag.mass_drift() <= tol),
            "energy_monotone": diag.energy_monotone(energy_tol),
            "halvings": diag.halvings,
            "unresolved_increases": diag.unresolved_increases,
            "excursions": diag.excursions,
        }

    def layer_mapping(self, runs: dict[str, PearlingRun]) -> dict:
        """Which layer pearled under which offset; above and below should differ."""
        mapping = {offset: run.pearled_layer for offset, run in runs.items()}
        above, below = mapping.get("above"), mapping.get("below")
        mapping["opposite_layers"] = bool(above and below and above != below)
        if "tuned" in runs:
            mapping["tuned_quiet"] = runs["tuned"].quiet
        return mapping
