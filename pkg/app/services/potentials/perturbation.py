from typing import Callable

import numpy as np

from app.utils.exceptions import ParameterError


class SolenoidalPerturbation:
    """V : R^N -> R^N with V(0) = 0, evaluated on columns of (N, M) arrays."""

    def __init__(self, dim: int, value: Callable, jacobian: Callable, name: str = "custom"):
        self.dim = dim
        self._value = value
        self._jacobian = jacobian
        self.name = name

        v0 = self._value(np.zeros((dim, 1)))[:, 0]
        if np.max(np.abs(v0)) > 1e-14:
            raise ParameterError(f"perturbation {name} must vanish at the origin")

    def value_batch(self, U) -> np.ndarray:
        return self._value(np.asarray(U, dtype=float))

    def jacobian_batch(self, U) -> np.ndarray:
        """J[i, j] = dV_i / du_j, shape (N, N, M)."""
        return self._jacobian(np.asarray(U, dtype=float))

    def value(self, u) -> np.ndarray:
        return self.value_batch(np.asarray(u, dtype=float)[:, None])[:, 0]

    def jacobian(self, u) -> np.ndarray:
        return self.jacobian_batch(np.asarray(u, dtype=float)[:, None])[:, :, 0]

    def curl(self, u) -> float:
        J = self.jacobian(u)
        return float(J[1, 0] - J[0, 1])

    @property
    def is_zero(self) -> bool:
        return self.name == "zero"


def rotational_perturbation() -> SolenoidalPerturbation:
    """V(u) = (-u2, u1); curl 2 everywhere."""

    def value(U):
        return np.stack([-U[1], U[0]])

    def jacobian(U):
        J = np.zeros((2, 2) + U.shape[1:])
        J[0, 1] = -1.0
        J[1, 0] = 1.0
        return J

    return SolenoidalPerturbation(2, value, jacobian, name="rotational")


def zero_perturbation(dim: int = 2) -> SolenoidalPerturbation:
    def value(U):
        return np.zeros_like(U)

    def jacobian(U):
        return np.zeros((dim, dim) + U.shape[1:])

    return SolenoidalPerturbation(dim, value, jacobian, name="zero")
