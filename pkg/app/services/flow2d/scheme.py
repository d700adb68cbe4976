import logging
from typing import Callable, Optional

import numpy as np

from app.models.flow import Diagnostics, FlowRun
from app.models.interface import FieldState
from app.schemas.flow_schema import SolverConfig
from app.services.interface.energy import energy_full, mass_full, perturbation_for, pointwise_terms
from app.services.interface.spectral import SpectralGrid
from app.services.potentials.base import Potential
from app.services.potentials.perturbation import SolenoidalPerturbation
from app.utils.exceptions import BlowUpError
from app.utils.validators import require_finite

logger = logging.getLogger(__name__)


def _apply(matrix_field: np.ndarray, vector_field: np.ndarray, transpose: bool = False) -> np.ndarray:
    if transpose:
        return np.einsum("ji...,j...->i...", matrix_field, vector_field)
    return np.einsum("ij...,j...->i...", matrix_field, vector_field)


# =========================================================
# CHEMICAL POTENTIAL
# =========================================================
def variational_derivative(
    state: FieldState,
    pot: Potential,
    V: Optional[SolenoidalPerturbation] = None,
    grid: Optional[SpectralGrid] = None,
) -> np.ndarray:
    """
    mu = (eps^2 Lap - Hess W + eps (grad V)^T) r + eps^2 (eps^2 eta1 Lap u - eta2 grad W),
    r = eps^2 Lap u - grad W + eps V.
    """
    require_finite("field", state.u)
    p = state.params
    eps = p.epsilon
    V = V or perturbation_for(p, state.N)
    grid = grid or SpectralGrid(state.shape, state.lengths)

    lap = grid.laplacian(state.u)
    terms = pointwise_terms(state.u, pot, V, order=2)
    r = eps ** 2 * lap - terms["gradW"] + eps * terms["V"]
    mu = (
        eps ** 2 * grid.laplacian(r)
        - _apply(terms["hessW"], r)
        + eps * _apply(terms["gradV"], r, transpose=True)
        + eps ** 2 * (eps ** 2 * p.eta1 * lap - p.eta2 * terms["gradW"])
    )
    return mu


def max_hessian_eigenvalue(state: FieldState, pot: Potential) -> float:
    V = perturbation_for(state.params, state.N)
    hess = pointwise_terms(state.u, pot, V, order=2)["hessW"]
    blocks = np.moveaxis(hess.reshape(state.N, state.N, -1), -1, 0)
    return float(np.max(np.abs(np.linalg.eigvalsh(blocks))))


def default_sigma(state: FieldState, pot: Potential, config: SolverConfig) -> float:
    if config.scheme == "semi-implicit":
        return 0.0
    if config.sigma is not None:
        return float(config.sigma)
    return 2.0 * max_hessian_eigenvalue(state, pot) ** 2


def reported_dt_max(state: FieldState, pot: Potential) -> float:
    """Explicit-part sanity bound 1 / (k_max^2 lambda_max^2); reported, not enforced."""
    grid = SpectralGrid(state.shape, state.lengths)
    lam = max(max_hessian_eigenvalue(state, pot), 1e-12)
    return float(1.0 / (np.max(grid.ksq) * lam ** 2))


# =========================================================
# ONE STEP
# =========================================================
def step(
    state: FieldState,
    config: SolverConfig,
    pot: Potential,
    V: Optional[SolenoidalPerturbation] = None,
    dt: Optional[float] = None,
    sigma: Optional[float] = None,
    grid: Optional[SpectralGrid] = None,
) -> FieldState:
    """
    u_hat' = (u_hat - dt |k|^2 F[mu - (eps^4 Lap^2 + sigma) u]) / (1 + dt (eps^4 |k|^6 + sigma |k|^2)).

    The zero mode is left untouched, so the mass of every species is exact.
    """
    dt = config.dt if dt is None else dt
    sigma = default_sigma(state, pot, config) if sigma is None else sigma
    grid = grid or SpectralGrid(state.shape, state.lengths)
    eps4 = state.params.epsilon ** 4

    mu = variational_derivative(state, pot, V, grid)
    u_hat = grid.forward(state.u)
    explicit = grid.forward(mu) - (eps4 * grid.bilaplacian_hat(u_hat) + sigma * u_hat)
    if config.dealias:
        explicit = explicit * grid.dealias

    ksq = grid.ksq
    new_hat = (u_hat - dt * ksq * explicit) / (1.0 + dt * (eps4 * ksq ** 3 + sigma * ksq))
    new_hat[..., 0, 0] = u_hat[..., 0, 0]
    u_new = grid.inverse(new_hat)

    if not np.all(np.isfinite(u_new)):
        raise BlowUpError(f"non-finite field after step at t={state.time:g}", last_stable=state)
    return state.with_field(u_new, state.time + dt)


# =========================================================
# TIME LOOP
# =========================================================
def run_flow(
    state: FieldState,
    config: SolverConfig,
    pot: Potential,
    V: Optional[SolenoidalPerturbation] = None,
    observer: Optional[Callable[[FieldState, Diagnostics], None]] = None,
    max_steps: Optional[int] = None,
) -> FlowRun:
    """
    Integrate to config.t_end. A step that raises the energy by more than
    energy_tol (relative) is retried with dt halved, up to max_halvings times.
    """
    V = V or perturbation_for(state.params, state.N)
    grid = SpectralGrid(state.shape, state.lengths)
    sigma = default_sigma(state, pot, config)

    diag = Diagnostics(sigma=sigma, dt_max=reported_dt_max(state, pot))
    if config.dt > diag.dt_max:
        logger.info("dt=%.3g exceeds the explicit sanity bound %.3g; relying on stabilization", config.dt, diag.dt_max)

    energy = energy_full(state, pot, V, grid)
    diag.record(state, energy, mass_full(state), 0.0)
    if observer:
        observer(state, diag)

    snapshots = [state] if config.snapshot_every else []
    steps = 0
    while state.time < config.t_end - 1e-12 * config.t_end:
        if max_steps is not None and steps >= max_steps:
            break
        dt = min(config.dt, config.t_end - state.time)
        for attempt in range(config.max_halvings + 1):
            try:
                candidate = step(state, config, pot, V, dt=dt, sigma=sigma, grid=grid)
            except BlowUpError as exc:
                raise BlowUpError(exc.message, last_stable=state, step=steps) from exc
            new_energy = energy_full(candidate, pot, V, grid)
            if new_energy <= energy + config.energy_tol * abs(energy):
                break
            if attempt == config.max_halvings:
                diag.unresolved_increases += 1
                logger.warning("energy increased at t=%.4g after %d halvings (dE=%.3e)", state.time, attempt, new_energy - energy)
                break
            dt *= 0.5
            diag.halvings += 1

        outside = pot.count_outside(candidate.u.reshape(candidate.N, -1)) if hasattr(pot, "lenient") else 0
        if outside and not diag.excursions:
            logger.warning("field left the physical simplex at t=%.4g (%d cells)", candidate.time, outside)
        diag.excursions += outside

        state, energy = candidate, new_energy
        steps += 1
        diag.record(state, energy, mass_full(state), dt)
        if observer:
            observer(state, diag)
        if config.snapshot_every and steps % config.snapshot_every == 0:
            snapshots.append(state)

    logger.info(
        "flow finished at t=%.4g after %d steps: energy %.6g, mass drift %.2e, %d halvings",
        state.time, steps, energy, diag.mass_drift(), diag.halvings,
    )
    return FlowRun(final=state, diagnostics=diag, snapshots=snapshots, steps=steps)
