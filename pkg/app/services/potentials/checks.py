import numpy as np

from app.services.potentials.base import Potential
from app.utils.exceptions import ParameterError
from app.utils.validators import as_point, require_positive


def finite_difference_gradient_check(pot: Potential, u, h: float = 1e-6) -> float:
    """
    max_i |grad_i - central difference_i| / (1 + |grad_i|).

    Points on the jump of an unregularized billiard are rejected.
    """
    require_positive("h", h)
    u = as_point(u, pot.dim)

    is_jump_point = getattr(pot, "is_jump_point", None)
    if is_jump_point is not None and is_jump_point(u, h):
        raise ParameterError(f"point {u.tolist()} lies on the potential jump; no derivative there")

    grad = pot.gradient(u)
    fd = np.empty_like(grad)
    for i in range(pot.dim):
        e = np.zeros_like(u)
        e[i] = h
        fd[i] = (pot.value(u + e) - pot.value(u - e)) / (2.0 * h)
    return float(np.max(np.abs(grad - fd) / (1.0 + np.abs(grad))))


def finite_difference_hessian_check(pot: Potential, u, h: float = 1e-5) -> float:
    """Same measure for the Hessian against central differences of the gradient."""
    require_positive("h", h)
    u = as_point(u, pot.dim)
    hess = pot.hessian(u)
    fd = np.empty_like(hess)
    for j in range(pot.dim):
        e = np.zeros_like(u)
        e[j] = h
        fd[:, j] = (pot.gradient(u + e) - pot.gradient(u - e)) / (2.0 * h)
    return float(np.max(np.abs(hess - fd) / (1.0 + np.abs(hess))))


def hessian_asymmetry(pot: Potential, u) -> float:
    hess = pot.hessian(u)
    return float(np.max(np.abs(hess - hess.T)))
