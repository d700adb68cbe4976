import numpy as np

from app.utils.exceptions import DegenerateCollisionError, ParameterError

TANGENCY_TOL = 1e-12


def reflect(v_minus, n) -> np.ndarray:
    """
    Specular reflection v_plus = v_minus - 2 (n . v_minus) n.

    n must be a unit vector not tangent to v_minus.
    """
    v_minus = np.asarray(v_minus, dtype=float)
    n = np.asarray(n, dtype=float)

    if abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise ParameterError(f"collision normal must be a unit vector, |n| = {np.linalg.norm(n)}")

    vn = float(n @ v_minus)
    if abs(vn) < TANGENCY_TOL * np.linalg.norm(v_minus):
        raise DegenerateCollisionError(
            "tangential collision: incoming velocity has no normal component",
            {"v_minus": v_minus.tolist(), "normal": n.tolist()},
        )
    return v_minus - 2.0 * vn * n
