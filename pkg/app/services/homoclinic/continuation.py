import logging
from typing import Optional

import numpy as np
from scipy.optimize import root

from app.models.profile import HomoclinicProfile
from app.services.billiard.tracer import trace_homoclinic
from app.services.billiard.trajectory import mollified_guess
from app.services.homoclinic.collocation import CollocationSystem, newton_collocation
from app.services.homoclinic.melnikov import melnikov_a0
from app.services.homoclinic.solver import build_profile, resample, solve_homoclinic
from app.services.potentials.base import Potential
from app.services.potentials.billiard_potential import BilliardSpec, RegularizedBilliard, max_smoothing_width
from app.services.potentials.mollifier import Mollifier
from app.services.potentials.perturbation import SolenoidalPerturbation
from app.utils.exceptions import ContinuationError, NoConvergenceError, ParameterError

logger = logging.getLogger(__name__)

MAX_HALVINGS = 8


# -------------------------------------------------
# FAR FIELD
# -------------------------------------------------
def far_field_equilibrium(pot: Potential, V: SolenoidalPerturbation, E: np.ndarray, epsilon: float) -> np.ndarray:
    """Root of grad W(Phi) - eps V(Phi) + eps^2 E = 0 near eps^2 B."""
    A = pot.hessian(np.zeros(pot.dim))
    start = -epsilon ** 2 * np.linalg.solve(A, E)

    def fun(phi):
        return pot.gradient(phi) - epsilon * V.value(phi) + epsilon ** 2 * E

    def jac(phi):
        return pot.hessian(phi) - epsilon * V.jacobian(phi)

    sol = root(fun, start, jac=jac, method="hybr", tol=1e-15)
    if not sol.success:
        raise NoConvergenceError(f"far-field equilibrium not found at eps={epsilon}: {sol.message}")
    return sol.x


# =========================================================
# EPSILON CONTINUATION
# =========================================================
def continue_epsilon(
    profile0: HomoclinicProfile,
    pot: Potential,
    V: SolenoidalPerturbation,
    m,
    epsilon: float,
    tol: Optional[float] = None,
    maxiter: Optional[int] = None,
) -> HomoclinicProfile:
    """
    Solve u'' + eps a u' - grad W(u) + eps V(u) = eps^2 E for (u, a) from the
    unperturbed profile, halving the epsilon step whenever Newton fails.
    """
    if epsilon < 0:
        raise ParameterError(f"epsilon must be nonnegative, got {epsilon}")
    if profile0.epsilon != 0.0:
        raise ParameterError("continuation starts from an epsilon = 0 profile")
    a0 = melnikov_a0(profile0, V)
    if epsilon == 0.0:
        return profile0.with_melnikov(a0)

    m = np.asarray(m, dtype=float)
    A = pot.hessian(np.zeros(pot.dim))
    E = -np.linalg.solve(A, m)

    u = profile0.u
    drift = 0.0
    reached = 0.0
    step = epsilon
    path: list[float] = []
    halvings = 0
    result = None

    while reached < epsilon:
        target = min(reached + step, epsilon)
        try:
            phi = far_field_equilibrium(pot, V, E, target)
            system = CollocationSystem(pot, profile0.z, target, V, E, phi)
            drift_guess = drift if reached > 0 else target * a0
            u_new, drift_new, residual, _ = newton_collocation(
                system, u, profile0.u, profile0.du, drift0=drift_guess, tol=tol, maxiter=maxiter
            )
        except NoConvergenceError as exc:
            halvings += 1
            step *= 0.5
            logger.info("epsilon step to %.4g failed (%s); halving to %.4g", target, exc.message, step)
            if halvings > MAX_HALVINGS:
                raise ContinuationError(
                    f"epsilon continuation stalled at {reached:.4g} before {epsilon:.4g}",
                    last_good=reached,
                    path=path,
                ) from exc
            continue

        u, drift, reached = u_new, drift_new, target
        path.append(target)
        result = build_profile(
            pot, profile0.z, u, residual,
            epsilon=target, far_field=phi, drift=drift, melnikov_a=drift / target,
        )

    logger.info("epsilon continuation reached %.4g in %d steps (a = %.6g)", epsilon, len(path), result.melnikov_a)
    return result


# =========================================================
# DELTA CONTINUATION (billiard limit -> regularized)
# =========================================================
def continue_delta(
    spec: BilliardSpec,
    delta_target: float,
    exit_angle: float = np.pi / 4,
    mollifier: Optional[Mollifier] = None,
    half_length: float = 6.0,
    nodes_per_delta: int = 40,
    start_factor: float = 0.4,
    max_collisions: int = 8,
    tol: Optional[float] = None,
    check_kernel: bool = False,
) -> HomoclinicProfile:
    """
    Regularized-billiard homoclinic at width delta_target, reached from the
    mollified billiard orbit at start_factor * delta0 by halving delta.
    """
    if delta_target <= 0:
        raise ParameterError(f"delta must be positive, got {delta_target}")

    delta0 = max_smoothing_width(spec)
    orbit = trace_homoclinic(spec, exit_angle, max_collisions=max_collisions)
    if not orbit.is_homoclinic:
        raise ContinuationError(f"no billiard homoclinic at exit angle {exit_angle:.6g} ({orbit.reason})", last_good=float("nan"))

    times = [event.time for event in orbit.collisions]
    center = 0.5 * (min(times) + max(times))

    schedule = []
    d = start_factor * delta0
    while d > delta_target:
        schedule.append(d)
        d *= 0.5
    schedule.append(delta_target)

    profile = None
    path: list[float] = []
    for d in schedule:
        h = d / nodes_per_delta
        n_nodes = 2 * int(np.ceil(half_length / h)) + 1
        z = np.linspace(-half_length, half_length, n_nodes)
        if profile is None:
            guess_u, _ = mollified_guess(orbit, spec, z + center, width=d)
            guess = (z, guess_u)
        else:
            guess = (z, resample(profile.z, profile.u, z)[0])

        pot = RegularizedBilliard(spec, d, mollifier)
        try:
            profile = solve_homoclinic(pot, guess, L=half_length, n_nodes=n_nodes, tol=tol, check_kernel=check_kernel)
        except NoConvergenceError as exc:
            raise ContinuationError(
                f"delta continuation failed at delta={d:.4g}: {exc.message}",
                last_good=path[-1] if path else float("nan"),
                path=path,
            ) from exc
        path.append(d)
        logger.info("delta=%.4g: %d collisions at %s", d, len(profile.collision_times), profile.collision_times)

    return profile
