import logging
from typing import Optional

import numpy as np

from app.models.geoflow import CurveTrajectory, RadialSystem, RadialTrajectory, Tau1State, Tau1Trajectory
from app.models.profile import HomoclinicProfile
from app.schemas.run_schema import RunConfig
from app.services.geoflow.curve import curve_willmore
from app.services.geoflow.radial import equal_radius_jacobian, jacobian_verdict, radial_willmore, stability_K
from app.services.geoflow.tau1 import tau1_flow
from app.services.interface.interface_service import InterfaceService
from app.services.potentials.base import Potential
from app.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

interfaces = InterfaceService()


class GeoflowService:
    """
    Reduced interface dynamics: tau1 quench, radial and planar-curve Willmore flows.
    """

    # -------------------------------------------------
    # PROFILE MOMENTS
    # -------------------------------------------------
    def moments(self, config: RunConfig, profile: Optional[HomoclinicProfile] = None) -> tuple[np.ndarray, float, float]:
        g = config.geoflow
        if g.M1 is not None and g.M2 is not None:
            M = np.asarray(g.M if g.M is not None else (profile.M if profile is not None else []), dtype=float)
            return M, g.M1, g.M2
        if profile is None:
            raise ParameterError("profile moments are neither configured nor available from a solved profile")
        return np.asarray(profile.M, dtype=float), profile.M1, profile.M2

    # -------------------------------------------------
    # RADIAL WILLMORE
    # -------------------------------------------------
    def radial(self, config: RunConfig, M1: float, M2: float, a0: Optional[float] = None) -> tuple[RadialTrajectory, dict]:
        rc = config.geoflow.radial
        a0 = rc.a0 if a0 is None else a0
        system = RadialSystem(radii=np.asarray(rc.radii, dtype=float), d=rc.d, a0=a0, M1=M1, M2=M2)
        trajectory = radial_willmore(
            system,
            rc.t_end,
            samples=rc.samples,
            extinction_ratio=rc.extinction_ratio,
            eta1=config.params.eta1,
            eta2=config.params.eta2,
            rtol=config.tolerances.ode_rtol,
            atol=config.tolerances.ode_atol,
        )
        return trajectory, self.stability(system)

    def stability(self, system: RadialSystem) -> dict:
        K, verdict = stability_K(system.R_bar, system.a0, system.d)
        out = {"R_bar": system.R_bar, "K": K, "verdict": verdict}
        if system.m >= 2:
            eigs = equal_radius_jacobian(system)
            coef = (system.d - 1) * system.M1 / (2.0 * system.M2)
            scale = coef * (system.R_bar ** -3 + abs(system.a0) * system.R_bar ** -2)
            out["jacobian_eigenvalues"] = eigs.tolist()
            out["jacobian_verdict"] = jacobian_verdict(eigs, scale)
            out["verdicts_agree"] = out["jacobian_verdict"] == verdict
        return out

    def radii_figure(self, config: RunConfig, M1: float, M2: float) -> dict:
        """The configured radial run at +|a0| and -|a0|."""
        a0 = abs(config.geoflow.radial.a0) or 1.0
        return {label: self.radial(config, M1, M2, a0=value) for label, value in (("positive", a0), ("negative", -a0))}

    # -------------------------------------------------
    # TAU1 QUENCH
    # -------------------------------------------------
    def tau1(self, config: RunConfig, pot: Potential, M: np.ndarray, M2: float) -> Tau1Trajectory:
        tc = config.geoflow.tau1
        if len(tc.B1) != pot.dim or M.size != pot.dim:
            raise ParameterError(f"B1 and M need {pot.dim} components")
        init = Tau1State(
            B1=np.asarray(tc.B1, dtype=float),
            radii=np.asarray(tc.radii, dtype=float),
            d=tc.d,
            domain_area=tc.domain_area,
            M=M,
            M2=M2,
            A=pot.hessian(np.zeros(pot.dim)),
        )
        return tau1_flow(init, tc.t_end, samples=tc.samples, rtol=config.tolerances.ode_rtol, atol=config.tolerances.ode_atol)

    # -------------------------------------------------
    # CURVE WILLMORE
    # -------------------------------------------------
    def curve(self, config: RunConfig, M1: float, M2: float) -> CurveTrajectory:
        cc = config.geoflow.curve
        geom = interfaces.build_curve(cc.curve)
        return curve_willmore(
            geom, cc.a0, M1, M2, config.params, cc.t_end,
            dt=cc.dt, l0=cc.l0, snapshot_every=cc.snapshot_every,
        )
