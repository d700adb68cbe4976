from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from app.utils.decorators import require_order
from app.utils.validators import as_point


class Potential(ABC):
    """
    Mixing potential W : R^N -> R.

    Subclasses implement `evaluate_batch` on columns of a (N, M) array;
    single-point evaluation and the convenience accessors are derived.
    """

    dim: int = 2
    smoothness: int = 2

    @abstractmethod
    def evaluate_batch(
        self, U: np.ndarray, order: int = 2
    ) -> tuple[np.ndarray, Optional[np.ndarray], Optional[np.ndarray]]:
        """Return value (M,), gradient (N, M) and Hessian (N, N, M) up to `order`."""

    @require_order()
    def evaluate(self, u, order: int = 2):
        u = as_point(u, self.dim)
        value, grad, hess = self.evaluate_batch(u[:, None], order)
        return (
            float(value[0]),
            None if grad is None else grad[:, 0],
            None if hess is None else hess[:, :, 0],
        )

    def value(self, u) -> float:
        return self.evaluate(u, 0)[0]

    def gradient(self, u) -> np.ndarray:
        return self.evaluate(u, 1)[1]

    def hessian(self, u) -> np.ndarray:
        return self.evaluate(u, 2)[2]


def eval_potential(pot: Potential, u, order: int = 2):
    """(value, gradient, hessian) of `pot` at `u`; entries above `order` are None."""
    return pot.evaluate(u, order)
