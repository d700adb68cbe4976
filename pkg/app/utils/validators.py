import numpy as np

from app.utils.exceptions import InvalidStateError, ParameterError, ShapeError


def require_positive(name: str, value: float) -> float:
    if not np.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be positive, got {value}")
    return float(value)


def require_finite(name: str, array: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(array)):
        raise InvalidStateError(f"{name} contains NaN or Inf")
    return array


def as_point(u, dim: int | None = None) -> np.ndarray:
    u = np.asarray(u, dtype=float).reshape(-1)
    if dim is not None and u.size != dim:
        raise ShapeError(f"point has {u.size} components, expected {dim}")
    return u
