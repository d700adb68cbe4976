import logging
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import null_space

from app.core.config import settings
from app.models.geoflow import RadialSystem, RadialTrajectory
from app.models.interface import sphere_area
from app.utils.exceptions import NoConvergenceError, ParameterError

logger = logging.getLogger(__name__)

NEUTRAL_TOL = 1e-12
FORCED_EXTINCTION = 1e-2


# =========================================================
# VECTOR FIELD
# =========================================================
def _bracket(R: np.ndarray, d: int, a0: float) -> np.ndarray:
    return ((3 - d) / R + a0) * ((d - 1) / R - a0)


def critical_curvature(R: np.ndarray, d: int, a0: float) -> float:
    """R_c^-2, the area-weighted mean of the bracket that keeps sum R^(d-1) fixed."""
    w = R ** (d - 3)
    return float(np.sum(_bracket(R, d, a0) * w) / np.sum(w))


def radial_velocity(R: np.ndarray, d: int, a0: float, M1: float, M2: float) -> np.ndarray:
    """dR_i/dtau = ((d-1) M1 / (2 M2)) R_i^-1 (bracket_i - R_c^-2)."""
    R = np.asarray(R, dtype=float)
    coef = (d - 1) * M1 / (2.0 * M2)
    return coef / R * (_bracket(R, d, a0) - critical_curvature(R, d, a0))


def b2_dot_m(R: np.ndarray, d: int, a0: float, M1: float, eta1: float = 1.0, eta2: float = 1.0) -> float:
    """
    Background slaving B2 . M evaluated on a sphere family (grad_s H0 = 0):
    -M1 int[((eta1+eta2)/2) H0^2 - 1/2 H0^2 (H0-a0)^2 - H1 H0 (H0-a0)] / int H0^2.
    """
    R = np.asarray(R, dtype=float)
    area = sphere_area(R, d)
    H0 = (d - 1) / R
    H1 = -(d - 1) / R ** 2
    integrand = 0.5 * (eta1 + eta2) * H0 ** 2 - 0.5 * H0 ** 2 * (H0 - a0) ** 2 - H1 * H0 * (H0 - a0)
    return float(-M1 * np.sum(integrand * area) / np.sum(H0 ** 2 * area))


# =========================================================
# STABILITY
# =========================================================
def stability_K(R_bar: float, a0: float, d: int) -> tuple[float, str]:
    """K = (d-1)(3-d)/R_bar + (d-2) a0; the equal-radius state is stable for K > 0."""
    if R_bar <= 0:
        raise ParameterError(f"R_bar must be positive, got {R_bar}")
    K = (d - 1) * (3 - d) / R_bar + (d - 2) * a0
    if abs(K) <= NEUTRAL_TOL:
        return float(K), "neutral"
    return float(K), "stable" if K > 0 else "unstable"


def equal_radius_jacobian(sys: RadialSystem, h: Optional[float] = None) -> np.ndarray:
    """
    Eigenvalues of the central-difference Jacobian at R_i = R_bar, restricted
    to the directions tangent to sum R^(d-1) = const.
    """
    if sys.m < 2:
        raise ParameterError("the equal-radius Jacobian needs at least two spheres")
    R_bar = sys.R_bar
    h = h or 1e-5 * R_bar
    base = np.full(sys.m, R_bar)
    J = np.empty((sys.m, sys.m))
    for j in range(sys.m):
        e = np.zeros(sys.m)
        e[j] = h
        J[:, j] = (
            radial_velocity(base + e, sys.d, sys.a0, sys.M1, sys.M2)
            - radial_velocity(base - e, sys.d, sys.a0, sys.M1, sys.M2)
        ) / (2.0 * h)
    Q = null_space(np.ones((1, sys.m)))
    return np.linalg.eigvals(Q.T @ J @ Q).real


def jacobian_verdict(eigenvalues: np.ndarray, scale: float) -> str:
    tol = 1e-6 * scale
    if np.all(np.abs(eigenvalues) <= tol):
        return "neutral"
    return "stable" if np.all(eigenvalues < -tol) else "unstable"


# =========================================================
# INTEGRATION WITH EXTINCTION
# =========================================================
def radial_willmore(
    sys: RadialSystem,
    t_end: float,
    samples: int = 501,
    extinction_ratio: float = 1e-4,
    eta1: float = 1.0,
    eta2: float = 1.0,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
) -> RadialTrajectory:
    """
    Adaptive Runge-Kutta integration; a sphere reaching extinction_ratio * R_bar
    is removed and the remaining family continues.
    """
    if sys.d not in (2, 3):
        raise ParameterError(f"radial flow is implemented for d in (2, 3), got {sys.d}")
    R0 = np.asarray(sys.radii, dtype=float)
    if np.any(R0 <= 0):
        raise ParameterError("radii must be positive")
    rtol = rtol or settings.MFCH_ODE_RTOL
    atol = atol or settings.MFCH_ODE_ATOL

    floor = extinction_ratio * sys.R_bar
    t_grid = np.linspace(0.0, t_end, samples)
    out = np.zeros((samples, sys.m))
    active = list(range(sys.m))
    R = R0.copy()
    t = 0.0
    events = []
    conserved = sys.conserved
    drift = 0.0

    while t < t_end and active:
        def rhs(_, y):
            return radial_velocity(y, sys.d, sys.a0, sys.M1, sys.M2)

        def hits_floor(_, y):
            return np.min(y) - floor

        hits_floor.terminal = True
        hits_floor.direction = -1

        mask = t_grid >= t
        sol = solve_ivp(
            rhs, (t, t_end), R, method="DOP853", rtol=rtol, atol=atol,
            events=hits_floor, dense_output=True,
        )
        t_stop = float(sol.t[-1])
        seg = mask & (t_grid <= t_stop)
        if np.any(seg):
            out[np.ix_(np.flatnonzero(seg), active)] = sol.sol(t_grid[seg]).T
        R = sol.y[:, -1]
        t = t_stop
        drift = max(drift, abs(np.sum(R ** (sys.d - 1)) - conserved) / conserved)

        forced = sol.status < 0 and np.min(R) < FORCED_EXTINCTION * sys.R_bar
        if sol.status < 0 and not forced:
            raise NoConvergenceError(f"radial integration failed at tau={t:.6g}: {sol.message}")
        if forced:
            logger.warning("step size collapsed at tau=%.6g with R_min=%.3g; forcing extinction", t, np.min(R))

        if sol.status == 1 or forced:
            k = int(np.argmin(R))
            lost = float(R[k] ** (sys.d - 1))
            events.append({"tau": t, "sphere": active[k], "radius": float(R[k])})
            logger.info("sphere %d extinguished at tau=%.6g", active[k], t)
            del active[k]
            R = np.delete(R, k)
            conserved -= lost
        else:
            break

    b2 = np.array([
        b2_dot_m(row[row > 0], sys.d, sys.a0, sys.M1, eta1, eta2) if np.any(row > 0) else np.nan
        for row in out
    ])
    return RadialTrajectory(
        taus=t_grid,
        radii=out,
        events=events,
        conserved_drift=float(drift),
        b2_dot_m=b2,
        survivors=active,
    )
