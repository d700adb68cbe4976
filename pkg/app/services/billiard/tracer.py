import logging

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq

from app.models.billiard import BilliardHomoclinic, CollisionEvent, Segment, SegmentKind
from app.services.billiard.reflection import reflect
from app.services.potentials.billiard_potential import BilliardSpec
from app.utils.exceptions import ParameterError, SpecInconsistencyError

logger = logging.getLogger(__name__)


# =========================================================
# 1. QUADRANT TRANSIT
# =========================================================
class RadialTransit:
    """
    Radial motion r' = sqrt(2 b(r)) inside the quadrant region.

    Time is measured backwards from the instant the orbit reaches R0:
    s = 0 at r = R0, s = total_time at r = r_min. On the quadratic core
    the motion is exactly r = core * exp(-sqrt(2) (s - s_core)).
    """

    def __init__(self, spec: BilliardSpec, r_min: float = 1e-8, nodes: int = 4001):
        self.spec = spec
        self.r_min = r_min
        rc, R0 = spec.core_radius, spec.R0
        r = np.linspace(rc, R0, nodes)
        b = spec.radial.evaluate(r)[0]
        z = cumulative_trapezoid(1.0 / np.sqrt(2.0 * b), r, initial=0.0)
        self._r = r
        self._s = z[-1] - z  # time remaining until R0
        self.annulus_time = float(z[-1])
        self.core_time = float(np.log(rc / r_min) / np.sqrt(2.0))
        self.total_time = self.annulus_time + self.core_time

    def radius(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        ann = s <= self.annulus_time
        out[ann] = np.interp(s[ann], self._s[::-1], self._r[::-1])
        core = ~ann
        out[core] = self.spec.core_radius * np.exp(-np.sqrt(2.0) * (s[core] - self.annulus_time))
        return out

    def speed(self, r) -> np.ndarray:
        return np.sqrt(2.0 * self.spec.radial.evaluate(np.asarray(r, dtype=float))[0])


# =========================================================
# 2. STRAIGHT FLIGHT ON THE PLATEAU
# =========================================================
def _first_event(spec: BilliardSpec, p, d, step: float, s_max: float):
    """
    March p + s d until the first collision (rho = 0), re-entry into the
    quadrant disc, or exit from the simplex. Returns (kind, s).
    """
    R0 = spec.R0

    # quadrant re-entry: |p + s d| = R0 with s > 0 heading inward
    pd = float(p @ d)
    disc = pd * pd - (float(p @ p) - R0 * R0)
    s_quad = np.inf
    if disc > 0:
        s_hit = -pd - np.sqrt(disc)
        if s_hit > 1e-12:
            s_quad = s_hit

    s = np.arange(1, int(np.ceil(s_max / step)) + 1) * step
    pts = p[:, None] + s[None, :] * d[:, None]
    rho = spec.level_set.evaluate(pts)[0]
    outside = ~spec.in_simplex(pts)

    rho0 = spec.level_set.evaluate(p[:, None] + 1e-12 * d[:, None])[0][0]
    signs = np.concatenate([[rho0], rho])
    crossing = np.nonzero((signs[:-1] > 0) & (signs[1:] <= 0))[0]
    s_col = np.inf
    if crossing.size:
        k = crossing[0]
        lo = 1e-12 if k == 0 else s[k - 1]
        hi = s[k]
        f = lambda t: spec.level_set.at(p + t * d)[0]
        s_col = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)

    exits = np.nonzero(outside)[0]
    s_out = s[exits[0]] if exits.size else np.inf

    s_first = min(s_quad, s_col, s_out)
    if not np.isfinite(s_first):
        return "none", np.inf
    if s_first == s_quad:
        return "quadrant", s_quad
    if s_first == s_col:
        return "collision", s_col
    return "simplex", s_out


def _line_miss(p, d) -> float:
    """Distance from the origin to the line through p with direction d."""
    return float(abs(p[0] * d[1] - p[1] * d[0]))


# =========================================================
# 3. TRACE
# =========================================================
def trace_homoclinic(
    spec: BilliardSpec,
    exit_angle: float,
    max_collisions: int = 8,
    r_min: float = 1e-8,
    step: float = 2e-3,
    miss_tol: float = 1e-8,
) -> BilliardHomoclinic:
    """
    Billiard-limit trajectory leaving the origin along `exit_angle` (radians).

    Collision times are shifted so that the first collision is at z = 0.
    """
    if max_collisions < 1:
        raise ParameterError("max_collisions must be at least 1")

    transit = RadialTransit(spec, r_min=r_min)
    speed = float(np.sqrt(2.0 * spec.b_plus))
    d = np.array([np.cos(exit_angle), np.sin(exit_angle)])
    p = spec.R0 * d

    if not spec.in_simplex(p[:, None])[0]:
        raise ParameterError(f"exit ray at angle {exit_angle:.6g} leaves the simplex")
    if spec.level_set.at(p)[0] <= 0:
        raise SpecInconsistencyError("exit ray starts inside the well region")

    s_max = 2.0 * np.sqrt(2.0) * spec.simplex_size + 1.0
    t = 0.0
    straight: list[Segment] = []
    collisions: list[CollisionEvent] = []
    reason, entry_angle, miss = "", None, np.nan
    is_homoclinic = False

    while True:
        kind, s = _first_event(spec, p, d, step, s_max)
        v = speed * d

        if kind == "collision":
            c = p + s * d
            straight.append(Segment(SegmentKind.STRAIGHT, p.copy(), c, t, t + s / speed, d.copy(), speed))
            t += s / speed

            if len(collisions) == max_collisions:
                reason = "exceeded max collisions"
                miss = _line_miss(p, d)
                straight.pop()
                break

            _, grad, _ = spec.level_set.at(c)
            n = grad / np.linalg.norm(grad)
            v_plus = reflect(v, n)
            Z = float(0.5 * (v_plus - v) @ grad)
            collisions.append(CollisionEvent(t, c, n, grad, v, v_plus, Z))
            p, d = c, v_plus / speed
            continue

        if kind == "quadrant":
            q = p + s * d
            straight.append(Segment(SegmentKind.STRAIGHT, p.copy(), q, t, t + s / speed, d.copy(), speed))
            t += s / speed
            miss = _line_miss(p, d)
            entry_angle = float(np.arctan2(-d[1], -d[0]))
            if not collisions:
                reason = "returned without collision"
            elif miss <= miss_tol:
                is_homoclinic = True
                reason = "homoclinic"
            else:
                reason = "missed origin"
            break

        reason = "left simplex" if kind == "simplex" else "no event"
        miss = _line_miss(p, d)
        break

    # shift times so the first collision sits at z = 0
    t0 = collisions[0].time if collisions else 0.0
    shifted_collisions = [
        CollisionEvent(c.time - t0, c.point, c.normal, c.grad_rho, c.v_minus, c.v_plus, c.normal_speed)
        for c in collisions
    ]
    segments = []
    start = np.array([np.cos(exit_angle), np.sin(exit_angle)])
    segments.append(
        Segment(SegmentKind.RADIAL_OUT, r_min * start, spec.R0 * start,
                -t0 - transit.total_time, -t0, start, speed)
    )
    for seg in straight:
        segments.append(
            Segment(seg.kind, seg.start, seg.end, seg.t_start - t0, seg.t_end - t0, seg.direction, speed)
        )
    if is_homoclinic:
        last = segments[-1]
        inward = -last.end / np.linalg.norm(last.end)
        segments.append(
            Segment(SegmentKind.RADIAL_IN, last.end, -r_min * inward,
                    last.t_end, last.t_end + transit.total_time, inward, speed)
        )

    logger.debug(
        "trace at angle %.6g: %s after %d collisions (miss %.3e)",
        exit_angle, reason, len(collisions), miss,
    )
    return BilliardHomoclinic(
        segments=segments,
        collisions=shifted_collisions,
        exit_angle=float(exit_angle),
        entry_angle=entry_angle,
        is_homoclinic=is_homoclinic,
        reason=reason,
        return_miss=float(miss),
        speed_plateau=speed,
        r_min=r_min,
        quadrant_time=transit.total_time,
    )
