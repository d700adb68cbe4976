import logging
from typing import Optional

import numpy as np

from app.models.interface import FieldState, InterfaceGeometry
from app.models.profile import CorrectorPair, HomoclinicProfile
from app.schemas.model_schema import ModelParams
from app.services.homoclinic.correctors import correctors
from app.services.homoclinic.solver import moment_first
from app.services.interface.spectral import SpectralGrid
from app.services.potentials.base import Potential
from app.services.potentials.perturbation import SolenoidalPerturbation, rotational_perturbation, zero_perturbation
from app.utils.helpers import trapz_uniform
from app.utils.validators import require_finite

logger = logging.getLogger(__name__)


def perturbation_for(params: ModelParams, dim: int = 2) -> SolenoidalPerturbation:
    if params.perturbation == "rotational":
        return rotational_perturbation()
    return zero_perturbation(dim)


# -------------------------------------------------
# POINTWISE TERMS
# -------------------------------------------------
def pointwise_terms(u: np.ndarray, pot: Potential, V: SolenoidalPerturbation, order: int = 2) -> dict:
    """
    W, grad W, Hess W, V and grad V on every cell, shaped like the field.

    Billiard potentials are evaluated without the simplex check; the
    number of cells outside it is returned under "outside".
    """
    N = u.shape[0]
    grid_shape = u.shape[1:]
    U = u.reshape(N, -1)
    outside = 0
    if hasattr(pot, "lenient"):
        outside = pot.count_outside(U)
        pot = pot.lenient()

    value, grad, hess = pot.evaluate_batch(U, order)
    terms = {
        "W": value.reshape(grid_shape),
        "V": V.value_batch(U).reshape((N,) + grid_shape),
        "outside": outside,
    }
    if order >= 1:
        terms["gradW"] = grad.reshape((N,) + grid_shape)
    if order >= 2:
        terms["hessW"] = hess.reshape((N, N) + grid_shape)
        terms["gradV"] = V.jacobian_batch(U).reshape((N, N) + grid_shape)
    return terms


# =========================================================
# ENERGY
# =========================================================
def energy_full(
    state: FieldState,
    pot: Potential,
    V: Optional[SolenoidalPerturbation] = None,
    grid: Optional[SpectralGrid] = None,
) -> float:
    """
    Cell-sum of 1/2 |eps^2 Lap u - grad W + eps V|^2 - eps^2 (eps^2 eta1/2 |grad u|^2 + eta2 W).

    |grad u|^2 is summed as -u . Lap u, which equals it exactly after summation
    over the periodic lattice.
    """
    require_finite("field", state.u)
    p = state.params
    eps = p.epsilon
    V = V or perturbation_for(p, state.N)
    grid = grid or SpectralGrid(state.shape, state.lengths)

    lap = grid.laplacian(state.u)
    terms = pointwise_terms(state.u, pot, V, order=1)
    residual = eps ** 2 * lap - terms["gradW"] + eps * terms["V"]

    density = (
        0.5 * np.sum(residual ** 2, axis=0)
        + eps ** 4 * 0.5 * p.eta1 * np.sum(state.u * lap, axis=0)
        - eps ** 2 * p.eta2 * terms["W"]
    )
    return float(np.sum(density) * state.cell_volume)


def energy_sharp(geom: InterfaceGeometry, a0: float, M1: float, params: ModelParams) -> float:
    """eps^3 (M1/2) integral of (H0 - a0)^2 - (eta1 + eta2) over the interface."""
    integrand = (geom.H0 - a0) ** 2 - (params.eta1 + params.eta2)
    return float(params.epsilon ** 3 * 0.5 * M1 * geom.integrate(integrand))


def quasi_minimizer_check(state: FieldState, pot: Potential, C: float, V: Optional[SolenoidalPerturbation] = None) -> dict:
    energy = energy_full(state, pot, V)
    bound = C * state.params.epsilon ** 3
    return {"energy": energy, "bound": bound, "passed": bool(energy <= bound)}


# =========================================================
# MASS
# =========================================================
def mass_full(state: FieldState) -> np.ndarray:
    """(1/eps) sum of u over the cells, per species."""
    require_finite("field", state.u)
    return np.sum(state.u, axis=(1, 2)) * state.cell_volume / state.params.epsilon


def mass_sharp(
    geom: InterfaceGeometry,
    profile: HomoclinicProfile,
    pot: Potential,
    V: SolenoidalPerturbation,
    params: ModelParams,
    domain_area: float,
    corrector: Optional[CorrectorPair] = None,
) -> np.ndarray:
    """
    |Gamma| M + eps (|Omega| B + |Gamma| int phi_h1 + int H0 ds int z phi_h).

    `profile` is the unperturbed one; the first corrector is computed from it
    when not supplied.
    """
    if corrector is None:
        corrector = correctors(profile, pot, V, params.m_vector, params.eta1, params.eta2)
    phi1_mass = trapz_uniform(corrector.phi_h1, profile.h, axis=1)
    bracket = (
        domain_area * corrector.B
        + geom.area * phi1_mass
        + geom.integrate(geom.H0) * moment_first(profile)
    )
    return geom.area * np.asarray(profile.M) + params.epsilon * bracket
