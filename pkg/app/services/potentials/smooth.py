from typing import Callable, Optional

import numpy as np

from app.services.potentials.base import Potential
from app.utils.exceptions import ParameterError


class SmoothPotential(Potential):
    """
    Smooth mixing potential from batch callables.

    value(U) -> (M,), gradient(U) -> (N, M), hessian(U) -> (N, N, M),
    optional third(U) -> (N, N, N, M) used only by diagnostics.
    """

    def __init__(
        self,
        dim: int,
        value: Callable,
        gradient: Callable,
        hessian: Callable,
        third: Optional[Callable] = None,
        name: str = "smooth",
        check_origin: bool = True,
    ):
        self.dim = dim
        self._value = value
        self._gradient = gradient
        self._hessian = hessian
        self._third = third
        self.name = name
        self.smoothness = 3 if third is not None else 2

        if check_origin:
            self._check_origin()

    def _check_origin(self):
        zero = np.zeros((self.dim, 1))
        w0 = float(self._value(zero)[0])
        g0 = self._gradient(zero)[:, 0]
        h0 = self._hessian(zero)[:, :, 0]
        if abs(w0) > 1e-14 or np.max(np.abs(g0)) > 1e-14:
            raise ParameterError(f"{self.name}: W(0) and grad W(0) must vanish")
        if np.max(np.abs(h0 - h0.T)) > 1e-12 or np.min(np.linalg.eigvalsh(h0)) <= 0:
            raise ParameterError(f"{self.name}: Hessian at the origin must be positive definite")

    def evaluate_batch(self, U, order=2):
        U = np.asarray(U, dtype=float)
        value = self._value(U)
        grad = self._gradient(U) if order >= 1 else None
        hess = self._hessian(U) if order >= 2 else None
        return value, grad, hess

    def third(self, U) -> np.ndarray:
        if self._third is None:
            raise ParameterError(f"{self.name} has no third derivative")
        return self._third(np.asarray(U, dtype=float))

    @property
    def hessian_at_origin(self) -> np.ndarray:
        return self._hessian(np.zeros((self.dim, 1)))[:, :, 0]


# =========================================================
# BUILT-IN POTENTIALS
# =========================================================
def decoupled_test_potential() -> SmoothPotential:
    """
    W(u) = (u1^2/2 - u1^3/3) + u2^2.

    The homoclinic to the origin is ((3/2) sech^2(z/2), 0).
    """

    def value(U):
        return 0.5 * U[0] ** 2 - U[0] ** 3 / 3.0 + U[1] ** 2

    def gradient(U):
        return np.stack([U[0] - U[0] ** 2, 2.0 * U[1]])

    def hessian(U):
        H = np.zeros((2, 2) + U.shape[1:])
        H[0, 0] = 1.0 - 2.0 * U[0]
        H[1, 1] = 2.0
        return H

    def third(U):
        T = np.zeros((2, 2, 2) + U.shape[1:])
        T[0, 0, 0] = -2.0
        return T

    return SmoothPotential(2, value, gradient, hessian, third, name="decoupled")


def quadratic_potential(A) -> SmoothPotential:
    """W(u) = 1/2 u^T A u for symmetric positive definite A."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError("quadratic potential needs a square matrix")
    dim = A.shape[0]

    def value(U):
        return 0.5 * np.einsum("i...,ij,j...->...", U, A, U)

    def gradient(U):
        return np.einsum("ij,j...->i...", A, U)

    def hessian(U):
        return np.broadcast_to(A.reshape(dim, dim, *([1] * (U.ndim - 1))), (dim, dim) + U.shape[1:]).copy()

    def third(U):
        return np.zeros((dim, dim, dim) + U.shape[1:])

    return SmoothPotential(dim, value, gradient, hessian, third, name="quadratic")
