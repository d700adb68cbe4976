import logging

import numpy as np

from app.models.interface import AdmissibilityReport, GeometryKind, InterfaceGeometry
from app.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

MAX_REPORTED_PAIRS = 50


def whisker_intersections(points: np.ndarray, normals: np.ndarray, half_length: float, tol: float = 1e-12):
    """
    Pairs (i, j), i < j, whose whiskers {x_i + r n_i : |r| <= half_length}
    intersect, including collinear overlaps.
    """
    n = points.shape[1]
    P = points.T
    D = normals.T
    dP = P[None, :, :] - P[:, None, :]  # P_j - P_i
    cross_nn = D[:, None, 0] * D[None, :, 1] - D[:, None, 1] * D[None, :, 0]
    cross_pj = dP[..., 0] * D[None, :, 1] - dP[..., 1] * D[None, :, 0]
    cross_pi = dP[..., 0] * D[:, None, 1] - dP[..., 1] * D[:, None, 0]

    with np.errstate(divide="ignore", invalid="ignore"):
        a = cross_pj / cross_nn
        b = cross_pi / cross_nn
    crossing = (np.abs(cross_nn) > tol) & (np.abs(a) <= half_length) & (np.abs(b) <= half_length)

    along = np.einsum("ijk,ik->ij", dP, D)
    collinear = (np.abs(cross_nn) <= tol) & (np.abs(cross_pi) <= tol) & (np.abs(along) <= 2.0 * half_length)

    hits = (crossing | collinear) & np.triu(np.ones((n, n), dtype=bool), k=1)
    return [tuple(map(int, p)) for p in np.argwhere(hits)]


def check_admissible(geom: InterfaceGeometry, epsilon: float, l0: float) -> AdmissibilityReport:
    """
    Whiskers of length 3 l0 on each side must be pairwise disjoint and
    max |k| 3 l0 < 1 so the whisker coordinates are valid.
    """
    if epsilon <= 0 or l0 <= 0:
        raise ParameterError("epsilon and l0 must be positive")
    reach = 3.0 * l0

    if geom.kind == GeometryKind.SPHERES:
        bound = float(np.max(np.abs(geom.H0)) / (geom.dim - 1) * reach)
        return AdmissibilityReport(bound < 1.0, bound, bound < 1.0, True, [])

    if geom.n_nodes < 64:
        raise ParameterError(f"admissibility check needs at least 64 nodes, got {geom.n_nodes}")

    bound = float(np.max(np.abs(geom.curvature)) * reach)
    pairs = whisker_intersections(geom.points, geom.normal, reach)
    report = AdmissibilityReport(
        passed=bound < 1.0 and not pairs,
        curvature_bound=bound,
        curvature_ok=bound < 1.0,
        whiskers_ok=not pairs,
        offending_pairs=[list(p) for p in pairs[:MAX_REPORTED_PAIRS]],
    )
    if not report.passed:
        logger.info("%s not admissible at l0=%.3g: curvature bound %.3g, %d whisker pairs", geom.name, l0, bound, len(pairs))
    return report
