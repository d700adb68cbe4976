import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from app.core.config import settings
from app.services.potentials.mollifier import Mollifier
from app.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)


class LimitForm(str, Enum):
    REFLECTED = "reflected"
    BAND_ORBIT = "band-orbit"


@dataclass
class LimitCollisionOperator:
    """
    d^2/dz^2 - b_sum h'(s(z)) g g^T on [-T, T], Dirichlet ends, T = 10/|Z|.

    REFLECTED: s(z) = Z|z|, the billiard limit of rho/delta along the orbit.
    BAND_ORBIT: s solves s'' = b_sum |g|^2 h(s), s(0) = turning point,
    the rescaled regularized orbit inside the band.
    """

    Z: float
    b_sum: float
    grad_rho: np.ndarray
    mollifier: Mollifier = field(default_factory=Mollifier)
    form: str = LimitForm.REFLECTED
    n_nodes: int = 1201

    def __post_init__(self):
        if self.Z == 0:
            raise ParameterError("normal collision speed must be nonzero")
        self.grad_rho = np.asarray(self.grad_rho, dtype=float)
        self.T = 10.0 / abs(self.Z)
        # interior nodes; the Dirichlet ends are eliminated
        self.z = np.linspace(-self.T, self.T, self.n_nodes + 2)[1:-1]
        self.h = float(self.z[1] - self.z[0])

    @property
    def normal(self) -> np.ndarray:
        return self.grad_rho / np.linalg.norm(self.grad_rho)

    @property
    def g2(self) -> float:
        return float(self.grad_rho @ self.grad_rho)

    # -------------------------------------------------
    # RESCALED ORBIT
    # -------------------------------------------------
    def turning_point(self) -> float:
        target = 1.0 - self.Z ** 2 / (2.0 * self.b_sum * self.g2)
        if target <= 0.0:
            raise ParameterError("normal speed too large: the orbit crosses the band without turning")
        if target >= 1.0:
            raise ParameterError("orbit does not reach the band")
        return brentq(lambda s: float(self.mollifier.primitive(s)) - target, -1.0, 1.0, xtol=1e-15)

    def argument(self) -> np.ndarray:
        if self.form == LimitForm.REFLECTED:
            return np.abs(self.Z * self.z)

        s0 = self.turning_point()
        k = self.b_sum * self.g2

        def rhs(_, y):
            return [y[1], k * float(self.mollifier.value(y[0]))]

        nodes, inverse = np.unique(np.abs(self.z), return_inverse=True)
        sol = solve_ivp(
            rhs, (0.0, self.T), [s0, 0.0], t_eval=nodes,
            rtol=settings.MFCH_ODE_RTOL, atol=settings.MFCH_ODE_ATOL, method="DOP853",
        )
        return sol.y[0][inverse]

    def potential(self) -> np.ndarray:
        """Scalar coefficient -b_sum |g|^2 h'(s(z)) of the normal component (nonnegative)."""
        return -self.b_sum * self.g2 * self.mollifier.derivative(self.argument())

    # -------------------------------------------------
    # EIGENVALUES
    # -------------------------------------------------
    def scalar_spectrum(self):
        """Sturm-Liouville problem on the normal component."""
        n = self.z.size
        diag = -2.0 / self.h ** 2 + self.potential()
        off = np.full(n - 1, 1.0 / self.h ** 2)
        return scipy.linalg.eigh_tridiagonal(diag, off, select="i", select_range=(n - 2, n - 1))

    def full_matrix(self) -> np.ndarray:
        """Dense 2-D operator, node-major ordering."""
        n, N = self.z.size, self.grad_rho.size
        coeff = -self.b_sum * self.mollifier.derivative(self.argument())
        gg = np.outer(self.grad_rho, self.grad_rho)
        A = np.zeros((n * N, n * N))
        for j in range(n):
            sl = slice(j * N, (j + 1) * N)
            A[sl, sl] = -2.0 / self.h ** 2 * np.eye(N) + coeff[j] * gg
            if j + 1 < n:
                nxt = slice((j + 1) * N, (j + 2) * N)
                A[sl, nxt] = A[nxt, sl] = np.eye(N) / self.h ** 2
        return A

    def nu(self) -> float:
        values, _ = self.scalar_spectrum()
        return float(values[-1])

    def nu_full(self) -> float:
        A = self.full_matrix()
        m = A.shape[0]
        return float(scipy.linalg.eigh(A, eigvals_only=True, subset_by_index=[m - 1, m - 1])[0])

    def positive_count(self) -> int:
        values, _ = self.scalar_spectrum()
        return int(np.count_nonzero(values > 0))

    def ground_state_sign_changes(self) -> int:
        _, vectors = self.scalar_spectrum()
        v = vectors[:, -1]
        v = v[np.abs(v) > 1e-12 * np.max(np.abs(v))]
        return int(np.count_nonzero(np.diff(np.sign(v)) != 0))
