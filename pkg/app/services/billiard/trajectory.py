import numpy as np
from scipy.ndimage import gaussian_filter1d

from app.models.billiard import BilliardHomoclinic, SegmentKind
from app.services.billiard.tracer import RadialTransit
from app.services.potentials.billiard_potential import BilliardSpec
from app.utils.exceptions import ParameterError
from app.utils.helpers import cumulative_polygon_area


def sample_trajectory(orbit: BilliardHomoclinic, spec: BilliardSpec, z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Positions (2, M), velocities (2, M) and segment ids (M,) at times z.

    Outside the traced window the exact core tails r ~ exp(-sqrt(2)|z|)
    are used, so any z in R is accepted.
    """
    if not orbit.is_homoclinic:
        raise ParameterError(f"cannot sample a non-homoclinic trajectory ({orbit.reason})")

    z = np.asarray(z, dtype=float)
    transit = RadialTransit(spec, r_min=orbit.r_min)
    u = np.zeros((2, z.size))
    v = np.zeros((2, z.size))
    seg_id = np.zeros(z.size, dtype=int)

    segments = orbit.segments
    first, last = segments[0], segments[-1]

    for k, seg in enumerate(segments):
        if k == 0:
            mask = z < seg.t_end
        elif k == len(segments) - 1:
            mask = z >= seg.t_start
        else:
            mask = (z >= seg.t_start) & (z < seg.t_end)
        if not np.any(mask):
            continue
        zk = z[mask]
        seg_id[mask] = k

        if seg.kind == SegmentKind.STRAIGHT:
            u[:, mask] = seg.start[:, None] + seg.speed * (zk - seg.t_start)[None, :] * seg.direction[:, None]
            v[:, mask] = seg.speed * seg.direction[:, None]
        elif seg.kind == SegmentKind.RADIAL_OUT:
            s = first.t_end - zk
            r = transit.radius(s)
            u[:, mask] = r[None, :] * seg.direction[:, None]
            v[:, mask] = transit.speed(r)[None, :] * seg.direction[:, None]
        else:
            s = zk - last.t_start
            r = transit.radius(s)
            outward = -seg.direction
            u[:, mask] = r[None, :] * outward[:, None]
            v[:, mask] = -transit.speed(r)[None, :] * outward[:, None]

    return u, v, seg_id


def mollified_guess(orbit: BilliardHomoclinic, spec: BilliardSpec, z, width: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Billiard-limit orbit on a uniform grid, smoothed by a Gaussian of
    standard deviation `width` (in z units) to round the collision corners.
    """
    u, _, _ = sample_trajectory(orbit, spec, z)
    h = float(z[1] - z[0])
    sigma = max(width / h, 1e-12)
    smooth = gaussian_filter1d(u, sigma, axis=1, mode="nearest")
    du = np.gradient(smooth, h, axis=1)
    return smooth, du


def enclosed_area(orbit: BilliardHomoclinic) -> float:
    """Signed area of the polygon origin -> c1 -> ... -> cn -> origin."""
    pts = np.vstack([np.zeros((1, 2)), orbit.collision_points])
    return cumulative_polygon_area(pts)


def collision_sign_changes(orbit: BilliardHomoclinic, spec: BilliardSpec, samples_per_unit: int = 2000) -> int:
    """
    Number of times d/dz rho(u(z)) jumps from negative to non-negative
    while u sits on the curve rho = 0. Matches `n_collisions` on a
    well-traced orbit.
    """
    segments = orbit.segments
    t0 = segments[1].t_start if len(segments) > 1 else 0.0
    t1 = segments[-1].t_start
    z = np.linspace(t0, t1, max(int((t1 - t0) * samples_per_unit), 16))
    u, v, _ = sample_trajectory(orbit, spec, z)
    rho, grad, _ = spec.level_set.evaluate(u)
    rate = np.einsum("im,im->m", grad, v)

    count = 0
    for k in range(z.size - 1):
        if rate[k] < 0 <= rate[k + 1] and min(abs(rho[k]), abs(rho[k + 1])) < 1e-2:
            count += 1
    return count
