import logging
from typing import Optional

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, splu, spsolve

from app.core.config import settings
from app.services.potentials.base import Potential
from app.services.potentials.perturbation import SolenoidalPerturbation
from app.utils.exceptions import NoConvergenceError
from app.utils.helpers import trapezoid_weights

logger = logging.getLogger(__name__)


def projection_generators(A_eff: np.ndarray, drift: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Generators of the unstable (left end) and stable (right end) subspaces
    of w'' + c w' - A w = 0: w' = Lambda w with Lambda = -c/2 +- sqrt(c^2/4 + A).
    """
    N = A_eff.shape[0]
    eye = np.eye(N)
    S = np.real(scipy.linalg.sqrtm(0.25 * drift ** 2 * eye + A_eff))
    return -0.5 * drift * eye + S, -0.5 * drift * eye - S


def block_tridiagonal(diag: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> sparse.csr_matrix:
    """Sparse matrix from (n, N, N) diagonal and (n-1, N, N) off-diagonal blocks, node-major ordering."""
    n, N, _ = diag.shape
    a, b = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")

    def coords(jr, jc, blocks):
        rows = (jr[:, None, None] * N + a[None]).ravel()
        cols = (jc[:, None, None] * N + b[None]).ravel()
        return rows, cols, blocks.ravel()

    j = np.arange(n)
    parts = [coords(j, j, diag), coords(j[1:], j[:-1], lower), coords(j[:-1], j[1:], upper)]
    rows = np.concatenate([p[0] for p in parts])
    cols = np.concatenate([p[1] for p in parts])
    vals = np.concatenate([p[2] for p in parts])
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n * N, n * N))


def to_vector(u: np.ndarray) -> np.ndarray:
    """(N, n) component arrays -> node-major vector."""
    return np.ascontiguousarray(u.T).ravel()


def to_components(x: np.ndarray, N: int) -> np.ndarray:
    return x.reshape(-1, N).T


class CollocationSystem:
    """
    Central-difference collocation of

        u'' + c u' - grad W(u) + eps V(u) - eps^2 E = 0

    on a uniform grid, with the ghost nodes eliminated through the projection
    conditions u'(-L) = Lambda_-(u - Phi), u'(L) = Lambda_+(u - Phi) about the
    far-field state Phi.
    """

    def __init__(
        self,
        pot: Potential,
        z: np.ndarray,
        epsilon: float = 0.0,
        perturbation: Optional[SolenoidalPerturbation] = None,
        E: Optional[np.ndarray] = None,
        far_field: Optional[np.ndarray] = None,
    ):
        self.pot = pot
        self.z = np.asarray(z, dtype=float)
        self.n = self.z.size
        self.h = float(self.z[1] - self.z[0])
        self.N = pot.dim
        self.epsilon = float(epsilon)
        self.perturbation = perturbation if epsilon != 0.0 else None
        self.E = np.zeros(self.N) if E is None else np.asarray(E, dtype=float)
        self.far_field = np.zeros(self.N) if far_field is None else np.asarray(far_field, dtype=float)
        self.weights = trapezoid_weights(self.n, self.h)

        _, _, hess = pot.evaluate_batch(self.far_field[:, None], 2)
        A_eff = hess[:, :, 0]
        if self.perturbation is not None:
            A_eff = A_eff - self.epsilon * self.perturbation.jacobian(self.far_field)
        self.A_eff = A_eff

    # -------------------------------------------------
    # LINEAR PART (second difference, drift, boundary rows)
    # -------------------------------------------------
    def linear_part(self, drift: float, far_field: Optional[np.ndarray] = None):
        n, N, h = self.n, self.N, self.h
        phi = self.far_field if far_field is None else far_field
        lam_minus, lam_plus = projection_generators(self.A_eff, drift)
        eye = np.eye(N)

        diag = np.broadcast_to(-2.0 * eye / h ** 2, (n, N, N)).copy()
        lower = np.broadcast_to(eye / h ** 2 - drift * eye / (2 * h), (n - 1, N, N)).copy()
        upper = np.broadcast_to(eye / h ** 2 + drift * eye / (2 * h), (n - 1, N, N)).copy()

        # ghost u_{-1} = u_1 - 2h Lambda_-(u_0 - Phi)
        diag[0] += -2.0 * lam_minus / h + drift * lam_minus
        upper[0] = 2.0 * eye / h ** 2
        # ghost u_n = u_{n-2} + 2h Lambda_+(u_{n-1} - Phi)
        diag[-1] += 2.0 * lam_plus / h + drift * lam_plus
        lower[-1] = 2.0 * eye / h ** 2

        offset = np.zeros(n * N)
        offset[:N] = (2.0 / h - drift) * (lam_minus @ phi)
        offset[-N:] = -(2.0 / h + drift) * (lam_plus @ phi)
        return block_tridiagonal(diag, lower, upper), offset

    # -------------------------------------------------
    # POINTWISE TERMS
    # -------------------------------------------------
    def pointwise(self, u: np.ndarray, order: int = 2):
        _, grad, hess = self.pot.evaluate_batch(u, order)
        G = -grad - (self.epsilon ** 2) * self.E[:, None]
        dG = -hess if hess is not None else None
        if self.perturbation is not None:
            G = G + self.epsilon * self.perturbation.value_batch(u)
            if dG is not None:
                dG = dG + self.epsilon * self.perturbation.jacobian_batch(u)
        return G, dG

    def residual(self, x: np.ndarray, drift: float) -> np.ndarray:
        D, offset = self.linear_part(drift)
        G, _ = self.pointwise(to_components(x, self.N), order=1)
        return D @ x + offset + to_vector(G)

    def jacobian(self, x: np.ndarray, drift: float) -> sparse.csr_matrix:
        D, _ = self.linear_part(drift)
        _, dG = self.pointwise(to_components(x, self.N), order=2)
        blocks = np.moveaxis(dG, -1, 0)
        zeros = np.zeros((self.n - 1, self.N, self.N))
        return (D + block_tridiagonal(blocks, zeros, zeros)).tocsr()

    def drift_column(self, x: np.ndarray, drift: float) -> np.ndarray:
        step = 1e-7 * max(1.0, abs(drift))
        return (self.residual(x, drift + step) - self.residual(x, drift - step)) / (2 * step)

    def phase_row(self, guess_du: np.ndarray) -> np.ndarray:
        return to_vector(guess_du * self.weights[None, :])

    def bordered(self, x: np.ndarray, drift: float, guess_du: np.ndarray) -> sparse.csc_matrix:
        J = self.jacobian(x, drift)
        col = sparse.csr_matrix(self.drift_column(x, drift)[:, None])
        row = sparse.csr_matrix(self.phase_row(guess_du)[None, :])
        return sparse.bmat([[J, col], [row, None]], format="csc")


# =========================================================
# NEWTON ITERATION
# =========================================================
def newton_collocation(
    system: CollocationSystem,
    u0: np.ndarray,
    guess_u: np.ndarray,
    guess_du: np.ndarray,
    drift0: float = 0.0,
    tol: Optional[float] = None,
    maxiter: Optional[int] = None,
) -> tuple[np.ndarray, float, float, int]:
    """
    Damped Newton on (u, c) with the phase condition <u - guess, guess'> = 0.

    Returns (u (N, n), drift c, residual max-norm, iterations).
    """
    tol = settings.MFCH_NEWTON_TOL if tol is None else tol
    maxiter = settings.MFCH_NEWTON_MAXITER if maxiter is None else maxiter
    N, h = system.N, system.h

    x = to_vector(u0)
    g = to_vector(guess_u)
    prow = system.phase_row(guess_du)
    drift = float(drift0)

    def full_residual(x_, c_):
        F = system.residual(x_, c_)
        return np.concatenate([F, [prow @ (x_ - g)]])

    R = full_residual(x, drift)
    norm = float(np.max(np.abs(R)))
    for iteration in range(maxiter + 1):
        # rounding floor of the second difference
        floor = 64.0 * np.finfo(float).eps * (1.0 + np.max(np.abs(x))) / h ** 2
        if not np.isfinite(norm):
            raise NoConvergenceError("Newton iterate became non-finite", {"iteration": iteration})
        if norm <= max(tol, floor):
            return to_components(x, N), drift, norm, iteration
        if iteration == maxiter:
            break

        K = system.bordered(x, drift, guess_du)
        step = spsolve(K, -R)
        if not np.all(np.isfinite(step)):
            raise NoConvergenceError("singular Newton system", {"iteration": iteration, "residual": norm})

        lam = 1.0
        while True:
            x_try = x + lam * step[:-1]
            c_try = drift + lam * step[-1]
            R_try = full_residual(x_try, c_try)
            norm_try = float(np.max(np.abs(R_try)))
            if np.isfinite(norm_try) and (norm_try < norm or lam < 1.0 / 64):
                break
            lam *= 0.5

        stalled = np.max(np.abs(lam * step)) <= 1e-13 * (1.0 + np.max(np.abs(x)))
        x, drift, R, norm = x_try, c_try, R_try, norm_try
        logger.debug("newton it=%d residual=%.3e damping=%.3g", iteration, norm, lam)
        if stalled and norm <= 1e3 * max(tol, floor):
            return to_components(x, N), drift, norm, iteration + 1

    raise NoConvergenceError(
        f"Newton did not converge in {maxiter} iterations (residual {norm:.3e}); guess too far",
        {"residual": norm, "maxiter": maxiter},
    )


# =========================================================
# KERNEL DIAGNOSTIC
# =========================================================
def smallest_singular_values(K, k: int = 2) -> np.ndarray:
    """k smallest singular values of a square sparse matrix, from eigenvalues of (K^T K)^{-1}."""
    K = sparse.csc_matrix(K)
    m = K.shape[0]
    try:
        lu = splu(K)
    except RuntimeError:
        return np.zeros(k)

    def matvec(v):
        return lu.solve(lu.solve(np.ravel(v), trans="T"))

    op = LinearOperator((m, m), matvec=matvec, dtype=float)
    try:
        vals = eigsh(op, k=k, which="LM", return_eigenvectors=False, tol=1e-10)
    except ArpackNoConvergence as exc:
        vals = exc.eigenvalues
        if vals is None or len(vals) == 0:
            return np.full(k, np.nan)
    vals = np.sort(np.abs(np.real(vals)))[::-1]
    return 1.0 / np.sqrt(vals)
