import logging
from typing import Optional

import numpy as np

from app.models.profile import HomoclinicProfile
from app.models.spectra import CollisionEigen, SpectralReport
from app.services.potentials.billiard_potential import RegularizedBilliard
from app.services.spectra.eigen import eigen_top
from app.services.spectra.limit_operator import LimitCollisionOperator, LimitForm
from app.services.spectra.linearization import assemble_linearization, essential_edge, kernel_residual
from app.utils.exceptions import NumericalError, ParameterError

logger = logging.getLogger(__name__)

CUTOFF_SWEEP = (0.1, 0.25, 0.5, 1.0)


# -------------------------------------------------
# INTERVALS
# -------------------------------------------------
def band_runs(profile: HomoclinicProfile, pot: RegularizedBilliard) -> list[tuple[int, int]]:
    """Index ranges [start, stop) of maximal runs of nodes inside the band."""
    spec = pot.spec
    rho = spec.level_set.evaluate(profile.u)[0]
    r = np.hypot(profile.u[0], profile.u[1])
    mask = ((r >= spec.R0) & (np.abs(rho) <= pot.delta)).astype(int)
    edges = np.diff(np.concatenate([[0], mask, [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    return list(zip(starts.tolist(), stops.tolist()))


def collision_intervals(profile: HomoclinicProfile, pot: RegularizedBilliard):
    """(collision K_i, junction J_i, tails K_-/K_+) as lists of [z_a, z_b]."""
    z = profile.z
    runs = band_runs(profile, pot)
    K = [[float(z[a]), float(z[b - 1])] for a, b in runs]
    J = [[K[i][1], K[i + 1][0]] for i in range(len(K) - 1)]
    tails = [[float(z[0]), K[0][0]], [K[-1][1], float(z[-1])]] if K else [[float(z[0]), float(z[-1])]]
    return K, J, tails


def limit_operators(profile: HomoclinicProfile, pot: RegularizedBilliard, form: LimitForm, n_nodes: int = 1201):
    spec = pot.spec
    ops = []
    for a, b in band_runs(profile, pot):
        rho, grad, _ = spec.level_set.evaluate(profile.u[:, a:b])
        turn = a + int(np.argmin(rho))
        entry = max(a - 1, 0)
        g_entry = spec.level_set.at(profile.u[:, entry])[1]
        Z = abs(float(g_entry @ profile.du[:, entry]))
        g = spec.level_set.at(profile.u[:, turn])[1]
        ops.append(
            LimitCollisionOperator(
                Z=Z, b_sum=spec.b_plus + spec.b_minus, grad_rho=g,
                mollifier=pot.mollifier, form=form, n_nodes=n_nodes,
            )
        )
    return ops


def localization(density: np.ndarray, z: np.ndarray, interval, collar: float) -> float:
    inside = (z >= interval[0] - collar) & (z <= interval[1] + collar)
    total = float(np.sum(density))
    return float(np.sum(density[inside]) / total) if total > 0 else 0.0


# =========================================================
# COLLISION ANALYSIS
# =========================================================
def collision_analysis(
    profile: HomoclinicProfile,
    pot: RegularizedBilliard,
    k: Optional[int] = None,
    cutoff_factor: float = 0.25,
    cutoff_sweep=CUTOFF_SWEEP,
    dense_cutoff: Optional[int] = None,
) -> SpectralReport:
    """
    Large eigenvalues of the linearization about a regularized-billiard
    homoclinic, paired with the limit collision operators of its collisions.
    """
    if not isinstance(pot, RegularizedBilliard):
        raise ParameterError("collision analysis needs a regularized billiard potential")
    delta = pot.delta
    K, J, tails = collision_intervals(profile, pot)
    n = len(K)
    if n == 0:
        raise ParameterError("profile never enters the smoothing band")

    nu_refs = [op.nu() for op in limit_operators(profile, pot, LimitForm.REFLECTED)]
    nu_orbits = []
    for op in limit_operators(profile, pot, LimitForm.BAND_ORBIT):
        try:
            nu_orbits.append(op.nu())
        except NumericalError as exc:
            logger.warning("band-orbit limit operator unavailable: %s", exc.message)
            nu_orbits.append(float("nan"))

    lin = assemble_linearization(profile, pot)
    eig = eigen_top(lin, k or n + 3, dense_cutoff=dense_cutoff)

    nu_min = min(nu_refs)
    cutoff = cutoff_factor * nu_min / delta ** 2
    counts = {f"{c:g}": int(np.count_nonzero(eig.values > c * nu_min / delta ** 2)) for c in cutoff_sweep}

    z = profile.z
    pairs = []
    for j in np.flatnonzero(eig.values > cutoff):
        density = np.sum(eig.vectors[:, j].reshape(-1, pot.dim) ** 2, axis=1)
        fractions = [localization(density, z, interval, delta) for interval in K]
        best = int(np.argmax(fractions))
        value = float(eig.values[j])
        pairs.append(
            CollisionEigen(
                value=value, interval=best, localization=fractions[best],
                scaled=value * delta ** 2, nu_ref=nu_refs[best], nu_orbit=nu_orbits[best],
            )
        )

    check = len(pairs) == n and len({p.interval for p in pairs}) == n
    if not check:
        logger.warning("%d eigenvalues above %.4g for %d collisions", len(pairs), cutoff, n)

    return SpectralReport(
        z=z,
        delta=delta,
        eigenvalues=eig.values,
        eigenvectors=eig.vectors,
        method=eig.method,
        collision_intervals=K,
        junction_intervals=J,
        tail_intervals=tails,
        collision_eigs=pairs,
        nu_refs=nu_refs,
        nu_orbits=nu_orbits,
        kernel_residual=kernel_residual(profile, lin),
        essential_edge=essential_edge(pot, profile.far_field),
        cutoff=cutoff,
        counts=counts,
        theorem_check=check,
    )
