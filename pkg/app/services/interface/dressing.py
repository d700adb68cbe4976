import logging

import numpy as np
from scipy.interpolate import CubicSpline

from app.models.interface import FieldState, InterfaceGeometry
from app.models.profile import HomoclinicProfile
from app.schemas.model_schema import ModelParams
from app.services.interface.distance import signed_distance
from app.utils.exceptions import ParameterError, ResolutionError
from app.utils.helpers import quintic_cutoff

logger = logging.getLogger(__name__)

MIN_CELLS_PER_EPSILON = 8


def dress(
    geom: InterfaceGeometry,
    profile: HomoclinicProfile,
    params: ModelParams,
    lengths: tuple,
    shape: tuple,
    l0: float,
) -> FieldState:
    """
    Bilayer field u = (1 - chi) Phi_inf + chi Phi_h(r / eps), chi = cutoff(|r| / l0),
    with r the signed distance to the interface.
    """
    eps = params.epsilon
    spacing = [L / n for L, n in zip(lengths, shape)]
    cells = eps / max(spacing)
    if cells < MIN_CELLS_PER_EPSILON:
        raise ResolutionError(
            f"grid resolves epsilon={eps:g} with {cells:.2f} cells; need at least {MIN_CELLS_PER_EPSILON}"
        )
    reach = 3.0 * l0 / eps
    if profile.z[0] > -reach or profile.z[-1] < reach:
        raise ParameterError(
            f"profile window [{profile.z[0]:.3g}, {profile.z[-1]:.3g}] does not cover |z| <= {reach:.3g}"
        )

    axes = [np.arange(n) * h for n, h in zip(shape, spacing)]
    X, Y = np.meshgrid(*axes, indexing="ij")
    r = signed_distance(geom, X, Y)

    far = np.asarray(profile.far_field, dtype=float)
    u = np.broadcast_to(far[:, None, None], (profile.dim,) + tuple(shape)).copy()
    inner = np.abs(r) < 3.0 * l0
    chi = quintic_cutoff(r[inner] / l0)
    phi = CubicSpline(profile.z, profile.u, axis=1)(r[inner] / eps)
    u[:, inner] = (1.0 - chi) * far[:, None] + chi * phi

    logger.info("dressed %s on %s grid: %d cells in the inner region", geom.name, shape, int(inner.sum()))
    return FieldState(u=u, lengths=tuple(float(L) for L in lengths), params=params)
