import logging
from typing import Optional

import numpy as np
from scipy.interpolate import splev, splprep

from app.models.geoflow import CurveTrajectory
from app.models.interface import GeometryKind, InterfaceGeometry
from app.schemas.model_schema import ModelParams
from app.services.interface.admissibility import check_admissible
from app.services.interface.curves import parametric_curve, spectral_derivative
from app.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

MIN_FLOW_NODES = 128
REPARAM_OVERSAMPLING = 16


# =========================================================
# VELOCITY
# =========================================================
def project_gamma(f: np.ndarray, H0: np.ndarray, ds: np.ndarray) -> np.ndarray:
    """f - H0 (int f H0 / int H0^2); the result is L2-orthogonal to H0 on the interface."""
    denom = np.sum(H0 ** 2 * ds)
    if denom <= 0:
        raise ParameterError("projection needs a curve with nonzero curvature")
    return f - H0 * (np.sum(f * H0 * ds) / denom)


def arclength_laplacian(values: np.ndarray, length: float) -> np.ndarray:
    """Second arclength derivative on a uniform-arclength sampling."""
    return (2.0 * np.pi / length) ** 2 * spectral_derivative(values, 2)


def willmore_velocity(geom: InterfaceGeometry, a0: float, M1: float, M2: float) -> np.ndarray:
    """(M1/M2) Pi[(Lap_s - 1/2 H0 (H0 - a0) - H1)(H0 - a0)], outward normal speed."""
    f = geom.H0 - a0
    raw = arclength_laplacian(f, geom.area) - 0.5 * geom.H0 * (geom.H0 - a0) * f - geom.H1 * f
    return (M1 / M2) * project_gamma(raw, geom.H0, geom.ds)


# =========================================================
# GEOMETRY UPDATES
# =========================================================
def reparametrize(points: np.ndarray, n: int) -> np.ndarray:
    """Resample a closed polygon at n points equally spaced in arclength of its periodic cubic spline."""
    closed = np.hstack([points, points[:, :1]])
    tck, _ = splprep([closed[0], closed[1]], s=0, per=1)
    fine = np.linspace(0.0, 1.0, REPARAM_OVERSAMPLING * n, endpoint=False)
    xy = np.array(splev(fine, tck))
    seg = np.hypot(*np.diff(np.hstack([xy, xy[:, :1]]), axis=1))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    target = np.arange(n) * cum[-1] / n
    params = np.interp(target, cum, np.append(fine, 1.0))
    return np.array(splev(params, tck))


def fourth_order_filter(n: int, length: float, coef: float, dt: float) -> np.ndarray:
    k = np.fft.fftfreq(n, d=1.0 / n) * 2.0 * np.pi / length
    return 1.0 / (1.0 + coef * dt * k ** 4)


# =========================================================
# FLOW
# =========================================================
def curve_willmore(
    geom: InterfaceGeometry,
    a0: float,
    M1: float,
    M2: float,
    params: ModelParams,
    t_end: float,
    dt: float = 1e-4,
    l0: Optional[float] = None,
    snapshot_every: int = 50,
) -> CurveTrajectory:
    """
    Length-preserving Willmore-type flow of a closed planar curve.

    Each step moves the nodes by dt V n with the fourth-order part damped by
    (1 + (M1/M2) dt k^4)^-1 in arclength Fourier modes and resamples to uniform
    arclength. A failed whisker check stops the run and is returned as `breakdown`.
    """
    if geom.kind != GeometryKind.CURVE:
        raise ParameterError("curve flow needs a planar curve")
    n = geom.n_nodes
    if n < MIN_FLOW_NODES:
        raise ParameterError(f"curve flow needs at least {MIN_FLOW_NODES} nodes, got {n}")
    l0 = l0 or 1.0 / (6.0 * np.max(np.abs(geom.curvature)))

    geom = parametric_curve(*reparametrize(geom.points, n), name=geom.name)
    length0 = geom.area
    coef = M1 / M2
    times, lengths, snapshots = [0.0], [length0], [(0.0, geom.points.copy())]
    defect = 0.0
    t = 0.0
    steps = 0
    breakdown = None

    while t < t_end - 1e-12 * t_end:
        h = min(dt, t_end - t)
        V = willmore_velocity(geom, a0, M1, M2)
        push = np.real(np.fft.ifft(fourth_order_filter(n, geom.area, coef, h) * np.fft.fft(V * geom.normal, axis=1), axis=1))
        Vf = project_gamma(np.sum(push * geom.normal, axis=0), geom.H0, geom.ds)
        defect = max(defect, abs(np.sum(Vf * geom.H0 * geom.ds)) / np.sqrt(np.sum(Vf ** 2 * geom.ds) * np.sum(geom.H0 ** 2 * geom.ds) + 1e-300))

        pts = geom.points + h * Vf * geom.normal
        geom = parametric_curve(*reparametrize(pts, n), name=geom.name)
        t += h
        steps += 1
        times.append(t)
        lengths.append(geom.area)

        if steps % snapshot_every == 0:
            snapshots.append((t, geom.points.copy()))
            report = check_admissible(geom, params.epsilon, l0)
            if not report.whiskers_ok:
                breakdown = f"whiskers intersect at t={t:.4g}: {report.offending_pairs[:3]}"
                logger.warning("curve flow stopped: %s", breakdown)
                break

    logger.info("curve flow: %d steps, length %.10g -> %.10g", steps, length0, geom.area)
    return CurveTrajectory(
        times=times,
        lengths=lengths,
        snapshots=snapshots,
        projection_defect=float(defect),
        final=geom,
        breakdown=breakdown,
    )
