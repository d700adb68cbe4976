import logging
from typing import Optional

import numpy as np
import pandas as pd

from app.models.interface import AdmissibilityReport, FieldState, InterfaceGeometry
from app.models.profile import HomoclinicProfile
from app.schemas.interface_schema import CurveConfig
from app.schemas.run_schema import RunConfig
from app.services.homoclinic.continuation import continue_epsilon
from app.services.homoclinic.melnikov import melnikov_a0
from app.services.interface.admissibility import check_admissible
from app.services.interface.curves import circle, dumbbell, ellipse, perturbed_circle, spline_curve
from app.services.interface.dressing import dress
from app.services.interface.energy import (
    energy_full,
    energy_sharp,
    mass_full,
    mass_sharp,
    perturbation_for,
    quasi_minimizer_check,
)
from app.services.potentials.base import Potential
from app.utils.exceptions import ParameterError
from app.utils.helpers import fitted_order, successive_ratios

logger = logging.getLogger(__name__)

RATIO_WINDOW = (1.5, 3.0)
MASS_ORDER = 0.9
# largest |u - far field| the cutoff may remove at |z| = l0 / eps
MAX_DRESSING_TAIL = 5e-3


class InterfaceService:
    """
    Curves from configuration, bilayer dressing and the sharp-interface checks.
    """

    # -------------------------------------------------
    # BUILD CURVE
    # -------------------------------------------------
    def build_curve(self, curve: CurveConfig) -> InterfaceGeometry:
        n = curve.n_nodes
        if curve.kind == "circle":
            return circle(curve.radius, curve.center, n)
        if curve.kind == "ellipse":
            return ellipse(curve.a, curve.b, curve.center, n)
        if curve.kind == "dumbbell":
            return dumbbell(curve.a, curve.b, curve.neck, curve.center, n)
        if curve.kind == "perturbed-circle":
            amplitudes = {k: (v[0], v[1] if len(v) > 1 else 0.0) for k, v in curve.amplitudes.items()}
            return perturbed_circle(curve.radius, curve.center, amplitudes, n)
        return spline_curve(curve.points, n, curve.smoothing)

    # -------------------------------------------------
    # ADMISSIBILITY
    # -------------------------------------------------
    def admissibility(self, config: RunConfig, geom: Optional[InterfaceGeometry] = None) -> AdmissibilityReport:
        geom = geom or self.build_curve(config.interface.curve)
        return check_admissible(geom, config.params.epsilon, config.interface.l0)

    # -------------------------------------------------
    # DRESS
    # -------------------------------------------------
    def dress(self, config: RunConfig, profile: HomoclinicProfile, geom: Optional[InterfaceGeometry] = None) -> FieldState:
        iface = config.interface
        geom = geom or self.build_curve(iface.curve)
        shape = self.grid_shape(config, config.params.epsilon)
        return dress(geom, profile, config.params, tuple(iface.lengths), shape, iface.l0)

    def grid_shape(self, config: RunConfig, epsilon: float) -> tuple:
        """Configured shape, or the even cell count giving cells_per_epsilon cells per epsilon."""
        iface = config.interface
        if iface.cells_per_epsilon is None:
            return tuple(iface.shape)
        cells = [int(np.ceil(L * iface.cells_per_epsilon / epsilon)) for L in iface.lengths]
        return tuple(n + n % 2 for n in cells)

    # -------------------------------------------------
    # DRESSED-STATE SUMMARY
    # -------------------------------------------------
    def summary(self, config: RunConfig, state: FieldState, pot: Potential, geom: InterfaceGeometry, profile: HomoclinicProfile) -> dict:
        params = config.params
        V = perturbation_for(params, state.N)
        out = {
            "energy_full": energy_full(state, pot, V),
            "energy_sharp": energy_sharp(geom, profile.melnikov_a, profile.M1, params),
            "mass_full": mass_full(state).tolist(),
            "mass_leading": (geom.area * np.asarray(profile.M)).tolist(),
            "length": geom.area,
        }
        if config.interface.quasi_minimizer_C is not None:
            out["quasi_minimizer"] = quasi_minimizer_check(state, pot, config.interface.quasi_minimizer_C, V)
        return out

    # -------------------------------------------------
    # CANHAM-HELFRICH LADDER
    # -------------------------------------------------
    def energy_check(self, config: RunConfig, pot: Potential, profile0: HomoclinicProfile) -> tuple[pd.DataFrame, dict]:
        """
        Dress the configured curve with the epsilon-continued profile at every
        epsilon of the ladder and compare energy and mass with their reductions.
        """
        iface = config.interface
        geom = self.build_curve(iface.curve)
        V = perturbation_for(config.params, pot.dim)
        a0 = melnikov_a0(profile0, V)

        # the largest epsilon cuts the profile closest to its core
        self.require_untruncated(profile0, iface.l0, max(iface.epsilons))

        rows = []
        for eps in sorted(iface.epsilons, reverse=True):
            params = config.params.model_copy(update={"epsilon": eps})
            profile = continue_epsilon(
                profile0, pot, V, params.m_vector, eps,
                tol=config.tolerances.newton_tol, maxiter=config.tolerances.newton_maxiter,
            )
            state = dress(geom, profile, params, tuple(iface.lengths), self.grid_shape(config, eps), iface.l0)
            e_full = energy_full(state, pot, V)
            e_sharp = energy_sharp(geom, a0, profile0.M1, params)
            m_full = mass_full(state)
            m_lead = geom.area * np.asarray(profile0.M)
            m_sharp = mass_sharp(geom, profile0, pot, V, params, state.domain_area)
            rows.append(
                {
                    "epsilon": eps,
                    "cells": state.shape[0],
                    "energy_full": e_full,
                    "energy_sharp": e_sharp,
                    "energy_gap_scaled": abs(e_full - e_sharp) / eps ** 3,
                    "mass_gap": float(np.linalg.norm(m_full - m_lead)),
                    "mass_sharp_gap": float(np.linalg.norm(m_full - m_sharp)),
                }
            )
            logger.info("eps=%.4g: energy %.6e vs %.6e", eps, e_full, e_sharp)

        table = pd.DataFrame(rows)
        ratios = successive_ratios(table["energy_gap_scaled"])
        mass_order = fitted_order(table["epsilon"], table["mass_gap"]) if len(table) >= 2 else float("nan")
        checks = {
            "energy_ratios": ratios,
            "energy_ratios_in_window": bool(ratios) and all(RATIO_WINDOW[0] <= r <= RATIO_WINDOW[1] for r in ratios),
            "mass_order": mass_order,
            "mass_order_ok": bool(mass_order >= MASS_ORDER),
        }
        return table, checks

    def require_untruncated(self, profile: HomoclinicProfile, l0: float, eps: float) -> float:
        """Largest deviation from the far field that the cutoff removes; raises when it is not negligible."""
        far = np.asarray(profile.far_field, dtype=float)
        outside = np.abs(profile.z) >= l0 / eps
        tail = float(np.max(np.abs(profile.u[:, outside] - far[:, None]))) if outside.any() else 0.0
        if tail > MAX_DRESSING_TAIL:
            raise ParameterError(
                f"l0={l0:g} cuts the profile at |z|={l0 / eps:.3g} where it still deviates by {tail:.3g} from the far field",
                {"l0": l0, "epsilon": eps, "tail": tail},
            )
        return tail
