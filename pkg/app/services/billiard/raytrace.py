import logging

import numpy as np

from app.services.billiard.tracer import trace_homoclinic
from app.services.potentials.billiard_potential import BilliardSpec, LevelSet, max_smoothing_width
from app.utils.exceptions import ConstructionError, ParameterError
from app.utils.helpers import smooth_step
from app.utils.validators import as_point

logger = logging.getLogger(__name__)


class BlendedArcLevelSet(LevelSet):
    """
    Two circular arcs through c1 and c2 with prescribed normals n1, n2,
    blended by a smooth step in the polar angle.

    rho_i(u) = R - |u - o_i|, o_i = c_i + R n_i, so rho_i(c_i) = 0 and
    grad rho_i(c_i) = n_i. The blend weight is exactly 1 near the ray
    through c1 and exactly 0 near the ray through c2.
    """

    name = "blended-arcs"

    def __init__(self, c1, c2, n1, n2, arc_radius: float, halfwidth: float):
        self.c = [np.asarray(c1, float), np.asarray(c2, float)]
        self.n = [np.asarray(n1, float), np.asarray(n2, float)]
        self.arc_radius = float(arc_radius)
        self.centers = [self.c[i] + self.arc_radius * self.n[i] for i in range(2)]
        self.theta = [float(np.arctan2(ci[1], ci[0])) for ci in self.c]
        self.halfwidth = float(halfwidth)
        self._orient = 1.0 if self.theta[1] > self.theta[0] else -1.0
        self._mid = 0.5 * (self.theta[0] + self.theta[1])

    def _arc(self, U, i):
        diff = U - self.centers[i][:, None]
        dist = np.maximum(np.linalg.norm(diff, axis=0), 1e-12)
        what = diff / dist
        rho = self.arc_radius - dist
        grad = -what
        eye = np.eye(2)[:, :, None]
        hess = -(eye - what[:, None, :] * what[None, :, :]) / dist
        return rho, grad, hess

    def _weight(self, U):
        r2 = np.maximum(U[0] ** 2 + U[1] ** 2, 1e-24)
        theta = np.arctan2(U[1], U[0])
        x = self._orient * (theta - self._mid)
        step, d1, d2 = smooth_step(x, -self.halfwidth, self.halfwidth)
        w = 1.0 - step
        w1 = -self._orient * d1
        w2 = -d2

        grad_theta = np.stack([-U[1], U[0]]) / r2
        h_theta = np.empty((2, 2) + U.shape[1:])
        h_theta[0, 0] = 2 * U[0] * U[1] / r2 ** 2
        h_theta[1, 1] = -h_theta[0, 0]
        h_theta[0, 1] = h_theta[1, 0] = (U[1] ** 2 - U[0] ** 2) / r2 ** 2

        grad_w = w1 * grad_theta
        hess_w = w2 * grad_theta[:, None, :] * grad_theta[None, :, :] + w1 * h_theta
        return w, grad_w, hess_w

    def evaluate(self, U):
        U = np.asarray(U, dtype=float)
        r1, g1, h1 = self._arc(U, 0)
        r2, g2, h2 = self._arc(U, 1)
        w, gw, hw = self._weight(U)

        rho = w * r1 + (1 - w) * r2
        dg = g1 - g2
        grad = w * g1 + (1 - w) * g2 + (r1 - r2) * gw
        hess = (
            w * h1 + (1 - w) * h2
            + gw[:, None, :] * dg[None, :, :]
            + dg[:, None, :] * gw[None, :, :]
            + (r1 - r2) * hw
        )
        return rho, grad, hess


def _reflection_normal(d_in: np.ndarray, d_out: np.ndarray) -> np.ndarray:
    diff = d_out - d_in
    norm = np.linalg.norm(diff)
    if norm < 1e-8:
        raise ConstructionError("legs are parallel; no reflection normal exists")
    n = diff / norm
    if abs(n @ d_in) < 1e-8:
        raise ConstructionError("required normal is tangential to a leg")
    return n


def raytrace_collision_curve(
    c1,
    c2,
    arc_halfwidth: float | None = None,
    arc_radius: float = 2.0,
    R0: float = 0.3,
    b_plus: float = 0.25,
    b_minus: float = 0.25,
    simplex_size: float = 1.0,
) -> BilliardSpec:
    """
    Billiard whose collision curve reflects the triangle (0, c1, c2) into
    itself: leave the origin towards c1, bounce to c2, return to the origin.
    """
    c1 = as_point(c1, 2)
    c2 = as_point(c2, 2)

    if np.linalg.norm(c1 - c2) < 1e-10:
        raise ParameterError("collision points must be distinct")
    for name, c in (("c1", c1), ("c2", c2)):
        if np.linalg.norm(c) <= R0:
            raise ParameterError(f"{name} lies inside the quadrant radius R0={R0}")
        if np.any(c < 0) or c.sum() > simplex_size:
            raise ParameterError(f"{name} lies outside the simplex")

    d01 = c1 / np.linalg.norm(c1)
    d12 = (c2 - c1) / np.linalg.norm(c2 - c1)
    d20 = -c2 / np.linalg.norm(c2)
    n1 = _reflection_normal(d01, d12)
    n2 = _reflection_normal(d12, d20)

    theta1 = np.arctan2(c1[1], c1[0])
    theta2 = np.arctan2(c2[1], c2[0])
    gap = abs(theta2 - theta1)
    if gap < 1e-6:
        raise ConstructionError("collision points lie on one ray from the origin")
    if arc_halfwidth is None:
        arc_halfwidth = 0.3 * gap
    if not 0 < arc_halfwidth < 0.5 * gap:
        raise ParameterError(f"arc halfwidth must lie in (0, {0.5 * gap:.4g}), got {arc_halfwidth}")

    level_set = BlendedArcLevelSet(c1, c2, n1, n2, arc_radius, arc_halfwidth)
    spec = BilliardSpec(
        R0=R0,
        b_plus=b_plus,
        b_minus=b_minus,
        level_set=level_set,
        simplex_size=simplex_size,
        name="raytraced",
    )

    # self-consistency: the triangle must be the traced orbit
    max_smoothing_width(spec)
    orbit = trace_homoclinic(spec, theta1, max_collisions=2)
    if not orbit.is_homoclinic or orbit.n_collisions != 2:
        raise ConstructionError(f"triangle is not reproduced by tracing ({orbit.reason})")
    residual = max(
        np.linalg.norm(orbit.collisions[0].point - c1),
        np.linalg.norm(orbit.collisions[1].point - c2),
    )
    if residual > 1e-8:
        raise ConstructionError(f"traced collision points miss the targets by {residual:.3e}")

    logger.info("ray-traced billiard through %s and %s (residual %.2e)", c1, c2, residual)
    return spec
