import logging
from typing import Optional, Union

import numpy as np
from scipy.interpolate import CubicSpline

from app.models.profile import HomoclinicProfile
from app.services.homoclinic.collocation import CollocationSystem, newton_collocation, smallest_singular_values, to_vector
from app.services.potentials.base import Potential
from app.utils.exceptions import NoConvergenceError, ParameterError
from app.utils.helpers import derivative_fourth_order, trapz_uniform

logger = logging.getLogger(__name__)

TRIVIAL_THRESHOLD = 1e-6
KERNEL_RATIO = 1e-3

Guess = Union[HomoclinicProfile, tuple]


# -------------------------------------------------
# GUESS HANDLING
# -------------------------------------------------
def _guess_arrays(guess: Guess) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(guess, HomoclinicProfile):
        return guess.z, guess.u
    z, u = guess[0], guess[1]
    z = np.asarray(z, dtype=float)
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.shape[-1] != z.size:
        raise ParameterError(f"guess has {u.shape[-1]} nodes but its grid has {z.size}")
    return z, u


def resample(z_from: np.ndarray, u_from: np.ndarray, z_to: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cubic-spline resampling of (N, n) data; zero outside the source window."""
    spline = CubicSpline(z_from, u_from, axis=1, extrapolate=False)
    u = np.nan_to_num(spline(z_to), nan=0.0)
    du = np.nan_to_num(spline(z_to, 1), nan=0.0)
    return u, du


def default_half_length(pot: Potential) -> float:
    lam_min = float(np.min(np.linalg.eigvalsh(pot.hessian(np.zeros(pot.dim)))))
    if lam_min <= 0:
        raise ParameterError("Hessian of the potential at the origin must be positive definite")
    return 20.0 / np.sqrt(lam_min)


# -------------------------------------------------
# MOMENTS AND DIAGNOSTICS
# -------------------------------------------------
def profile_moments(z: np.ndarray, u: np.ndarray, du: np.ndarray) -> tuple[np.ndarray, float, float]:
    h = float(z[1] - z[0])
    M = trapz_uniform(u, h, axis=1)
    M1 = float(trapz_uniform(np.sum(du ** 2, axis=0), h))
    M2 = float(trapz_uniform(np.sum(u ** 2, axis=0), h))
    return M, M1, M2


def moment_first(profile: HomoclinicProfile) -> np.ndarray:
    """First z-moment  int z phi dz  (vector)."""
    return trapz_uniform(profile.z[None, :] * profile.u, profile.h, axis=1)


def hamiltonian_residual(profile: HomoclinicProfile, pot: Potential) -> float:
    """max |1/2 |phi'|^2 - W(phi)| along an epsilon = 0 profile."""
    value = pot.evaluate_batch(profile.u, 0)[0]
    return float(np.max(np.abs(0.5 * np.sum(profile.du ** 2, axis=0) - value)))


def evenness_defect(profile: HomoclinicProfile) -> float:
    return float(np.max(np.abs(profile.u - profile.u[:, ::-1])))


def collision_times(pot: Potential, z: np.ndarray, u: np.ndarray) -> list[float]:
    """Interior minima of rho(u(z)) inside the smoothing band, refined by a parabola."""
    spec = getattr(pot, "spec", None)
    delta = getattr(pot, "delta", None)
    if spec is None or delta is None:
        return []
    rho = spec.level_set.evaluate(u)[0]
    r = np.hypot(u[0], u[1])
    band = (r >= spec.R0) & (np.abs(rho) <= delta)
    h = float(z[1] - z[0])

    times = []
    for j in range(1, z.size - 1):
        if not band[j] or not (rho[j - 1] > rho[j] <= rho[j + 1]):
            continue
        curvature = rho[j - 1] - 2.0 * rho[j] + rho[j + 1]
        shift = 0.5 * h * (rho[j - 1] - rho[j + 1]) / curvature if curvature > 0 else 0.0
        times.append(float(z[j] + shift))
    return times


def build_profile(
    pot: Potential,
    z: np.ndarray,
    u: np.ndarray,
    residual: float,
    epsilon: float = 0.0,
    far_field: Optional[np.ndarray] = None,
    drift: float = 0.0,
    melnikov_a: float = 0.0,
) -> HomoclinicProfile:
    du = derivative_fourth_order(u, float(z[1] - z[0]), axis=1)
    M, M1, M2 = profile_moments(z, u, du)
    mollifier = getattr(pot, "mollifier", None)
    return HomoclinicProfile(
        z=z,
        u=u,
        du=du,
        far_field=np.zeros(pot.dim) if far_field is None else far_field,
        melnikov_a=float(melnikov_a),
        epsilon=float(epsilon),
        M=M,
        M1=M1,
        M2=M2,
        residual_norm=float(residual),
        collision_times=collision_times(pot, z, u),
        delta=getattr(pot, "delta", None),
        drift=float(drift),
        potential_tag=getattr(pot, "name", None) or getattr(getattr(pot, "spec", None), "name", type(pot).__name__),
        mollifier_tag=mollifier.tag if mollifier is not None else "",
    )


# =========================================================
# SOLVER
# =========================================================
def solve_homoclinic(
    pot: Potential,
    guess: Guess,
    L: Optional[float] = None,
    n_nodes: Optional[int] = None,
    tol: Optional[float] = None,
    maxiter: Optional[int] = None,
    richardson: bool = False,
    check_kernel: bool = True,
) -> HomoclinicProfile:
    """
    Homoclinic to the origin of u'' = grad W(u) by bordered Newton
    collocation on [-L, L].

    The grid defaults to the spacing of the guess; `richardson` repeats the
    solve on the halved grid and combines (4 u_{h/2} - u_h)/3 at the coarse nodes.
    """
    z_g, u_g = _guess_arrays(guess)
    if u_g.shape[0] != pot.dim:
        raise ParameterError(f"guess has {u_g.shape[0]} components, potential has {pot.dim}")
    if L is None:
        L = default_half_length(pot) if n_nodes is not None else 0.5 * float(z_g[-1] - z_g[0])
    if n_nodes is None:
        n_nodes = int(round(2.0 * L / float(z_g[1] - z_g[0]))) + 1

    # Newton iterates may step slightly outside the simplex
    solve_pot = pot.lenient() if hasattr(pot, "lenient") else pot

    z = np.linspace(-L, L, n_nodes)
    g, dg = resample(z_g, u_g, z)
    system = CollocationSystem(solve_pot, z)
    u, drift, residual, iterations = newton_collocation(system, g, g, dg, tol=tol, maxiter=maxiter)
    logger.info("homoclinic solve: %d nodes, %d iterations, residual %.3e", n_nodes, iterations, residual)

    if np.max(np.abs(u)) < TRIVIAL_THRESHOLD:
        raise NoConvergenceError("Newton converged to the trivial solution u = 0")

    if check_kernel:
        kernel_diagnostic(system, u, drift, dg)

    if richardson:
        z_f = np.linspace(-L, L, 2 * n_nodes - 1)
        g_f, dg_f = resample(z_g, u_g, z_f)
        u0_f, _ = resample(z, u, z_f)
        fine = CollocationSystem(solve_pot, z_f)
        u_f, _, _, _ = newton_collocation(fine, u0_f, g_f, dg_f, drift0=drift, tol=tol, maxiter=maxiter)
        u = (4.0 * u_f[:, ::2] - u) / 3.0

    return build_profile(pot, z, u, residual, drift=drift)


def kernel_diagnostic(system: CollocationSystem, u: np.ndarray, drift: float, guess_du: np.ndarray) -> np.ndarray:
    """Two smallest singular values of the phase-conditioned Jacobian; warns on a second kernel direction."""
    K = system.bordered(to_vector(u), drift, guess_du)
    sigma = smallest_singular_values(K, k=2)
    if np.all(np.isfinite(sigma)) and sigma[0] <= KERNEL_RATIO * sigma[1]:
        logger.warning(
            "degenerate kernel: smallest singular values %.3e, %.3e of the phase-conditioned Jacobian",
            sigma[0], sigma[1],
        )
    return sigma
