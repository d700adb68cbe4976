import logging

import numpy as np
import pandas as pd

from app.core.config import settings
from app.models.profile import HomoclinicProfile
from app.models.spectra import SpectralReport
from app.schemas.run_schema import RunConfig
from app.services.homoclinic.continuation import continue_delta
from app.services.potentials.base import Potential
from app.services.potentials.billiard_potential import RegularizedBilliard
from app.services.spectra.collision import collision_analysis
from app.services.spectra.eigen import eigen_top
from app.services.spectra.linearization import constant_operator, essential_edge
from app.services.spectra.pearling import pearling_predictor
from app.utils.exceptions import ParameterError
from app.utils.helpers import fitted_order

logger = logging.getLogger(__name__)


class SpectraService:
    """
    Collision-eigenvalue analysis, the delta ladder and pearling predictions.
    """

    # -------------------------------------------------
    # SINGLE PROFILE
    # -------------------------------------------------
    def analyse(self, config: RunConfig, profile: HomoclinicProfile, pot: Potential) -> SpectralReport:
        if not isinstance(pot, RegularizedBilliard):
            raise ParameterError("spectrum analysis needs a regularized billiard potential")
        sc = config.spectra
        return collision_analysis(
            profile,
            pot,
            k=sc.k,
            cutoff_factor=sc.cutoff_factor,
            cutoff_sweep=sc.cutoff_sweep,
            dense_cutoff=settings.MFCH_DENSE_EIG_CUTOFF,
        )

    # -------------------------------------------------
    # TABLE OF ONE REPORT
    # -------------------------------------------------
    def table(self, report: SpectralReport) -> pd.DataFrame:
        rows = [
            {
                "delta": report.delta,
                "collision": e.interval,
                "lambda": e.value,
                "lambda_delta2": e.scaled,
                "nu_reflected": e.nu_ref,
                "nu_orbit": e.nu_orbit,
                "error": abs(e.scaled - e.nu_orbit),
                "error_reflected": abs(e.scaled - e.nu_ref),
                "localization": e.localization,
            }
            for e in sorted(report.collision_eigs, key=lambda e: e.interval)
        ]
        return pd.DataFrame(rows, columns=[
            "delta", "collision", "lambda", "lambda_delta2", "nu_reflected", "nu_orbit",
            "error", "error_reflected", "localization",
        ])

    # -------------------------------------------------
    # DELTA LADDER
    # -------------------------------------------------
    def ladder(self, config: RunConfig, pot: RegularizedBilliard) -> tuple[pd.DataFrame, dict]:
        """
        Re-solve the homoclinic at every configured delta and tabulate lambda delta^2
        against nu; the fitted order is taken per collision over the ladder.
        """
        if not isinstance(pot, RegularizedBilliard):
            raise ParameterError("the delta ladder needs a regularized billiard potential")
        prof = config.profile
        frames, checks = [], {}
        for delta in sorted(config.spectra.deltas, reverse=True):
            profile = continue_delta(
                pot.spec, delta,
                exit_angle=prof.exit_angle,
                mollifier=pot.mollifier,
                half_length=prof.half_length or 6.0,
                nodes_per_delta=prof.nodes_per_delta,
                max_collisions=prof.max_collisions,
                tol=config.tolerances.newton_tol,
            )
            twin = RegularizedBilliard(pot.spec, delta, pot.mollifier)
            report = self.analyse(config, profile, twin)
            frame = self.table(report)
            frame["kernel_residual"] = report.kernel_residual
            frame["count_above_cutoff"] = len(report.collision_eigs)
            frames.append(frame)
            checks[f"delta={delta:g}"] = report.theorem_check

        table = pd.concat(frames, ignore_index=True)
        orders, reflected = {}, {}
        for collision, group in table.groupby("collision"):
            if len(group) >= 2:
                orders[int(collision)] = fitted_order(group["delta"], group["error"])
                reflected[int(collision)] = fitted_order(group["delta"], group["error_reflected"])
        checks["orders"] = orders
        checks["orders_reflected"] = reflected
        logger.info("spectra ladder: fitted orders %s", orders)
        return table, checks

    # -------------------------------------------------
    # ESSENTIAL SPECTRUM
    # -------------------------------------------------
    def essential(self, pot: Potential, far_field=None, L: float = 40.0, n_nodes: int = 801) -> dict:
        """Edge from the far-field Hessian and the top of the constant-coefficient block."""
        A = pot.hessian(np.zeros(pot.dim) if far_field is None else np.asarray(far_field, dtype=float))
        top = eigen_top(constant_operator(A, L, n_nodes), 1).values[0]
        return {"edge": essential_edge(pot, far_field), "constant_block_top": float(top)}

    # -------------------------------------------------
    # PEARLING PREDICTION
    # -------------------------------------------------
    def predict_pearling(self, config: RunConfig, report: SpectralReport) -> list:
        positive = [e.value for e in report.collision_eigs if e.value >= 0]
        sc = config.spectra
        return pearling_predictor(positive, config.params.epsilon, sc.geometry, sc.geometry_size)
