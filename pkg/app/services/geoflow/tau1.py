import logging
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from app.core.config import settings
from app.models.geoflow import Tau1State, Tau1Trajectory
from app.models.interface import sphere_area
from app.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

EXTINCTION_RADIUS = 1e-4


def curvature_square_integral(radii: np.ndarray, d: int) -> float:
    """int H0^2 over a sphere family, H0 = (d-1)/R."""
    R = np.asarray(radii, dtype=float)
    return float(np.sum(((d - 1) / R) ** 2 * sphere_area(R, d)))


def tau1_flow(init: Tau1State, t_end: float, samples: int = 501, rtol: Optional[float] = None, atol: Optional[float] = None) -> Tau1Trajectory:
    """
    Quenched curvature flow V = (E / M2) H0 coupled to
    dE/dtau = -(M^T A^2 M / (|Omega| M2)) E int H0^2.

    E is carried as E0 exp(-kappa q) with q' = int H0^2, so its sign never
    changes; B1 is recovered from the mass constant through the interface
    area, and the mismatch between the two values of B1 . M is the mass
    relation residual.
    """
    R0 = np.asarray(init.radii, dtype=float)
    if np.any(R0 <= 0):
        raise ParameterError("radii must be positive")
    rtol = rtol or settings.MFCH_ODE_RTOL
    atol = atol or settings.MFCH_ODE_ATOL

    M = np.asarray(init.M, dtype=float)
    A2M = init.A @ (init.A @ M)
    kappa = float(M @ A2M) / (init.domain_area * init.M2)
    E0 = init.E
    d = init.d

    def rhs(_, y):
        q, R = y[0], y[1:]
        E = E0 * np.exp(-kappa * q)
        return np.concatenate([[curvature_square_integral(R, d)], (E / init.M2) * (d - 1) / R])

    def extinct(_, y):
        return np.min(y[1:]) - EXTINCTION_RADIUS

    extinct.terminal = True
    extinct.direction = -1

    t_eval = np.linspace(0.0, t_end, samples)
    sol = solve_ivp(rhs, (0.0, t_end), np.concatenate([[0.0], R0]), method="DOP853",
                    t_eval=t_eval, rtol=rtol, atol=atol, events=extinct)
    if sol.status < 0:
        raise ParameterError(f"tau1 integration failed: {sol.message}")

    q = sol.y[0]
    radii = sol.y[1:].T
    E = E0 * np.exp(-kappa * q)
    gamma0 = np.array([np.sum(sphere_area(row, d)) for row in radii])
    B1 = init.B1[None, :] - np.outer(gamma0 - init.gamma0, A2M) / init.domain_area
    residual = float(np.max(np.abs(B1 @ M - E))) if E.size else 0.0

    monotone = bool(np.all(np.abs(E[1:]) <= np.abs(E[:-1]) + 1e-15))
    if sol.status == 1:
        logger.warning("a sphere shrank to extinction at tau1=%.6g", sol.t_events[0][0])
    logger.info("tau1 flow: E %.3e -> %.3e, mass relation residual %.2e", E0, E[-1], residual)
    return Tau1Trajectory(
        taus=sol.t,
        E=E,
        B1=B1,
        radii=radii,
        mass_residual=residual,
        monotone=monotone,
        extinct=sol.status == 1,
    )
