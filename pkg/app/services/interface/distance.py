import numpy as np
from scipy.spatial import cKDTree

from app.models.interface import GeometryKind, InterfaceGeometry
from app.utils.exceptions import ParameterError


def signed_distance(geom: InterfaceGeometry, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """
    Signed distance to the curve, positive along the outward normal.

    Exact for circles; otherwise nearest node followed by one Newton step
    on the osculating parabola at that node.
    """
    if geom.kind != GeometryKind.CURVE:
        raise ParameterError("signed distance is defined for planar curves")
    if geom.is_circle:
        return np.hypot(X - geom.center[0], Y - geom.center[1]) - geom.circle_radius

    query = np.stack([X.ravel(), Y.ravel()], axis=1)
    tree = cKDTree(geom.points.T)
    _, idx = tree.query(query)

    P = geom.points[:, idx].T
    n = geom.normal[:, idx].T
    t = np.stack([-n[:, 1], n[:, 0]], axis=1)
    k = geom.curvature[idx]
    d = query - P

    # gamma(s) = s t - k s^2 / 2 n, minimize |d - gamma(s)|
    s = np.einsum("ij,ij->i", d, t)
    gamma = s[:, None] * t - 0.5 * (k * s ** 2)[:, None] * n
    dgamma = t - (k * s)[:, None] * n
    resid = d - gamma
    f = np.einsum("ij,ij->i", resid, dgamma)
    fprime = -np.einsum("ij,ij->i", dgamma, dgamma) - k * np.einsum("ij,ij->i", resid, n)
    s = s - f / np.where(np.abs(fprime) > 1e-14, fprime, -1.0)

    gamma = s[:, None] * t - 0.5 * (k * s ** 2)[:, None] * n
    normal_s = n + (k * s)[:, None] * t
    normal_s /= np.linalg.norm(normal_s, axis=1, keepdims=True)
    dist = np.einsum("ij,ij->i", d - gamma, normal_s)
    return dist.reshape(X.shape)
