import numpy as np
from scipy.integrate import trapezoid


# -------------------------------------------------
# QUADRATURE
# -------------------------------------------------
def trapz_uniform(values: np.ndarray, h: float, axis: int = 0) -> np.ndarray:
    """Trapezoid rule on a uniform grid along `axis`."""
    return trapezoid(values, dx=h, axis=axis)


def cumulative_polygon_area(points: np.ndarray) -> float:
    """Signed area enclosed by a closed polygon (shoelace), counter-clockwise positive."""
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


# -------------------------------------------------
# CONVERGENCE FITS
# -------------------------------------------------
def fitted_order(scales, errors) -> float:
    """Least-squares slope of log(error) against log(scale)."""
    scales = np.asarray(scales, dtype=float)
    errors = np.asarray(errors, dtype=float)
    errors = np.maximum(errors, np.finfo(float).tiny)
    slope, _ = np.polyfit(np.log(scales), np.log(errors), 1)
    return float(slope)


def successive_ratios(errors) -> list[float]:
    errors = np.asarray(errors, dtype=float)
    return [float(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]


# -------------------------------------------------
# SMOOTH STEPS
# -------------------------------------------------
def _psi(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def _dpsi(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos]) / t[pos] ** 2
    return out


def _d2psi(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    tp = t[pos]
    out[pos] = np.exp(-1.0 / tp) * (1.0 - 2.0 * tp) / tp ** 4
    return out


def smooth_step(x, a: float, b: float):
    """
    C-infinity step: 0 for x <= a, 1 for x >= b.
    Returns (value, first derivative, second derivative) in x.
    """
    x = np.asarray(x, dtype=float)
    w = b - a
    t = (x - a) / w
    p, q = _psi(t), _psi(1.0 - t)
    dp, dq = _dpsi(t), -_dpsi(1.0 - t)
    d2p, d2q = _d2psi(t), _d2psi(1.0 - t)
    s = p + q
    ds = dp + dq
    d2s = d2p + d2q
    value = p / s
    d1 = (dp * s - p * ds) / s ** 2
    d2 = (d2p * s - p * d2s) / s ** 2 - 2.0 * d1 * ds / s
    return value, d1 / w, d2 / w ** 2


def quintic_cutoff(r):
    """
    Cutoff equal to 1 on |r| <= 1 and 0 on |r| >= 3, with a quintic blend
    whose first two derivatives vanish at both junctions.
    """
    r = np.abs(np.asarray(r, dtype=float))
    t = np.clip((r - 1.0) / 2.0, 0.0, 1.0)
    return 1.0 - t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)


# -------------------------------------------------
# LINEAR ALGEBRA
# -------------------------------------------------
def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.ravel(a)
    b = np.ravel(b)
    return float(abs(a @ b) / (np.linalg.norm(a) * np.linalg.norm(b)))


# -------------------------------------------------
# DIFFERENCES
# -------------------------------------------------
def derivative_fourth_order(values: np.ndarray, h: float, axis: int = -1) -> np.ndarray:
    """Fourth-order central first derivative; second-order one-sided stencils at the two ends."""
    values = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    out = np.gradient(values, h, axis=-1, edge_order=2)
    if values.shape[-1] >= 5:
        out[..., 2:-2] = (
            -values[..., 4:] + 8.0 * values[..., 3:-1] - 8.0 * values[..., 1:-3] + values[..., :-4]
        ) / (12.0 * h)
    return np.moveaxis(out, -1, axis)


def trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w
