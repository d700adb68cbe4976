import numpy as np
from scipy import sparse

from app.models.profile import HomoclinicProfile
from app.services.homoclinic.collocation import CollocationSystem, to_vector
from app.services.potentials.base import Potential
from app.services.potentials.smooth import quadratic_potential
from app.utils.exceptions import ShapeError


class Linearization:
    """
    L = d^2/dz^2 - Hess W(psi) on the profile grid with the solver's
    projection conditions, stored in the symmetric form W^{1/2} L W^{-1/2}
    (W the trapezoid weights). Both forms share eigenvalues.
    """

    def __init__(self, z: np.ndarray, N: int, raw: sparse.csr_matrix, sqrt_weights: np.ndarray):
        self.z = z
        self.N = N
        self.raw = raw
        self.sqrt_weights = sqrt_weights
        scale = sparse.diags(sqrt_weights)
        inverse = sparse.diags(1.0 / sqrt_weights)
        sym = (scale @ raw @ inverse).tocsr()
        self.matrix = (0.5 * (sym + sym.T)).tocsr()

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def to_grid(self, vectors: np.ndarray) -> np.ndarray:
        """Symmetric-form eigenvectors -> nodal values of L's eigenfunctions."""
        return vectors / self.sqrt_weights[:, None] if vectors.ndim == 2 else vectors / self.sqrt_weights

    def asymmetry(self) -> float:
        diff = self.matrix - self.matrix.T
        return float(abs(diff).max()) if diff.nnz else 0.0


def assemble_linearization(profile: HomoclinicProfile, pot: Potential) -> Linearization:
    if profile.u.shape != (pot.dim, profile.n_nodes) or profile.du.shape != profile.u.shape:
        raise ShapeError(
            f"profile arrays {profile.u.shape} do not match {pot.dim} components on {profile.n_nodes} nodes"
        )
    eval_pot = pot.lenient() if hasattr(pot, "lenient") else pot
    system = CollocationSystem(eval_pot, profile.z, far_field=profile.far_field)
    raw = system.jacobian(to_vector(profile.u), 0.0)
    weights = np.repeat(system.weights, pot.dim)
    return Linearization(profile.z, pot.dim, raw, np.sqrt(weights))


def constant_operator(A, L: float, n_nodes: int) -> Linearization:
    """d^2 - A on [-L, L] with projection conditions (the profile-free case)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    pot = quadratic_potential(A)
    z = np.linspace(-L, L, n_nodes)
    system = CollocationSystem(pot, z)
    raw = system.jacobian(np.zeros(n_nodes * pot.dim), 0.0)
    return Linearization(z, pot.dim, raw, np.sqrt(np.repeat(system.weights, pot.dim)))


def essential_edge(pot: Potential, far_field=None) -> float:
    """-lambda_min(Hess W(far field)): the top of the essential spectrum."""
    phi = np.zeros(pot.dim) if far_field is None else np.asarray(far_field, dtype=float)
    H = pot.hessian(phi)
    return -float(np.min(np.linalg.eigvalsh(0.5 * (H + H.T))))


def kernel_residual(profile: HomoclinicProfile, op: Linearization) -> float:
    """||L psi'|| / ||psi'|| in the weighted norm over the interior nodes."""
    v = to_vector(profile.du)
    r = op.raw @ v
    w = op.sqrt_weights ** 2
    N = op.N
    interior = slice(N, -N)
    num = np.sqrt(np.sum(w[interior] * r[interior] ** 2))
    den = np.sqrt(np.sum(w * v ** 2))
    return float(num / den)
