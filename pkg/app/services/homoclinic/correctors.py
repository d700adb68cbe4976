import logging

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from app.models.profile import CorrectorPair, HomoclinicProfile
from app.services.homoclinic.collocation import CollocationSystem, block_tridiagonal, to_components, to_vector
from app.services.homoclinic.melnikov import melnikov_a0
from app.services.potentials.base import Potential
from app.services.potentials.perturbation import SolenoidalPerturbation
from app.utils.exceptions import DegeneracyError, ParameterError

logger = logging.getLogger(__name__)


class BorderedOperator:
    """
    [L0, phi'; <phi', .>, 0] on the profile grid, L0 = d^2/dz^2 - Hess W(phi)
    with projection conditions about a prescribed far field.
    """

    def __init__(self, profile: HomoclinicProfile, pot: Potential):
        if profile.epsilon != 0.0:
            raise ParameterError("correctors are defined about the epsilon = 0 profile")
        self.profile = profile
        self.system = CollocationSystem(pot, profile.z)
        D, _ = self.system.linear_part(0.0)
        _, dG = self.system.pointwise(profile.u, order=2)
        blocks = np.moveaxis(dG, -1, 0)
        zeros = np.zeros((profile.n_nodes - 1, pot.dim, pot.dim))
        self.L0 = (D + block_tridiagonal(blocks, zeros, zeros)).tocsr()

        kernel = to_vector(profile.du)
        self.row = self.system.phase_row(profile.du)
        K = sparse.bmat(
            [[self.L0, sparse.csr_matrix(kernel[:, None])], [sparse.csr_matrix(self.row[None, :]), None]],
            format="csc",
        )
        try:
            self._lu = splu(K)
        except RuntimeError as exc:
            raise DegeneracyError("bordered operator is singular: kernel dimension exceeds one") from exc

    def solve(self, rhs: np.ndarray, far_field: np.ndarray) -> tuple[np.ndarray, float]:
        """Solve L0 w + mu phi' = rhs with w -> far_field; returns (w (N, n), mu)."""
        _, offset = self.system.linear_part(0.0, far_field=far_field)
        b = np.concatenate([to_vector(rhs) - offset, [0.0]])
        sol = self._lu.solve(b)
        if not np.all(np.isfinite(sol)):
            raise DegeneracyError("bordered solve produced non-finite values")
        return to_components(sol[:-1], self.system.N), float(sol[-1])


def correctors(
    profile0: HomoclinicProfile,
    pot: Potential,
    V: SolenoidalPerturbation,
    m,
    eta1: float,
    eta2: float,
) -> CorrectorPair:
    """zeta_h and the first corrector phi_h1, both orthogonal to phi_h'."""
    m = np.asarray(m, dtype=float)
    A = pot.hessian(np.zeros(pot.dim))
    E = -np.linalg.solve(A, m)
    B = np.linalg.solve(A, np.linalg.solve(A, m))
    a0 = melnikov_a0(profile0, V)

    op = BorderedOperator(profile0, pot)
    _, grad, _ = pot.evaluate_batch(profile0.u, 1)
    zeta_rhs = (eta2 - eta1) * grad + m[:, None]
    zeta, mu_zeta = op.solve(zeta_rhs, far_field=E)

    phi1_rhs = -(V.value_batch(profile0.u) + a0 * profile0.du)
    phi1, mu_phi1 = op.solve(phi1_rhs, far_field=np.zeros(pot.dim))

    logger.info("corrector solvability defects: zeta %.3e, phi1 %.3e", mu_zeta, mu_phi1)
    return CorrectorPair(
        z=profile0.z,
        zeta_h=zeta,
        phi_h1=phi1,
        E=E,
        B=B,
        a0=a0,
        solvability={"zeta": mu_zeta, "phi_h1": mu_phi1},
    )
