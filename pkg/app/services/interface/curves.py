import numpy as np
from scipy.interpolate import splev, splprep

from app.models.interface import GeometryKind, InterfaceGeometry, sphere_area
from app.utils.exceptions import ParameterError

MIN_NODES = 64


def spectral_derivative(values: np.ndarray, order: int) -> np.ndarray:
    """Derivative in the parameter t in [0, 2 pi) of periodic samples."""
    n = values.shape[-1]
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return np.real(np.fft.ifft((1j * k) ** order * np.fft.fft(values, axis=-1), axis=-1))


def from_samples(points: np.ndarray, d1: np.ndarray, d2: np.ndarray, dt: float, name: str, **extra) -> InterfaceGeometry:
    """Geometry of a counter-clockwise closed curve from samples and parameter derivatives."""
    speed = np.hypot(d1[0], d1[1])
    if np.min(speed) <= 0:
        raise ParameterError(f"{name}: parametrization is singular")
    curvature = (d1[0] * d2[1] - d1[1] * d2[0]) / speed ** 3
    normal = np.stack([d1[1], -d1[0]]) / speed
    ds = speed * dt
    if np.sum(ds * curvature) < 0:
        raise ParameterError(f"{name}: curve must be oriented counter-clockwise")
    return InterfaceGeometry(
        kind=GeometryKind.CURVE,
        H0=curvature,
        H1=-curvature ** 2,
        ds=ds,
        points=points,
        normal=normal,
        curvature=curvature,
        name=name,
        **extra,
    )


def parametric_curve(x: np.ndarray, y: np.ndarray, name: str = "curve") -> InterfaceGeometry:
    """Closed curve from samples uniform in a 2 pi-periodic parameter."""
    n = x.size
    if n < MIN_NODES:
        raise ParameterError(f"curves need at least {MIN_NODES} nodes, got {n}")
    pts = np.stack([x, y])
    return from_samples(pts, spectral_derivative(pts, 1), spectral_derivative(pts, 2), 2.0 * np.pi / n, name)


# -------------------------------------------------
# CONSTRUCTORS
# -------------------------------------------------
def circle(R: float, center=(0.0, 0.0), n: int = 512) -> InterfaceGeometry:
    if R <= 0:
        raise ParameterError(f"circle radius must be positive, got {R}")
    if n < MIN_NODES:
        raise ParameterError(f"curves need at least {MIN_NODES} nodes, got {n}")
    t = 2.0 * np.pi * np.arange(n) / n
    c = np.asarray(center, dtype=float)
    normal = np.stack([np.cos(t), np.sin(t)])
    k = np.full(n, 1.0 / R)
    return InterfaceGeometry(
        kind=GeometryKind.CURVE,
        H0=k,
        H1=-k ** 2,
        ds=np.full(n, 2.0 * np.pi * R / n),
        points=c[:, None] + R * normal,
        normal=normal,
        curvature=k,
        center=c,
        circle_radius=float(R),
        name=f"circle(R={R:g})",
    )


def ellipse(a: float, b: float, center=(0.0, 0.0), n: int = 512) -> InterfaceGeometry:
    t = 2.0 * np.pi * np.arange(n) / n
    c = np.asarray(center, dtype=float)
    return parametric_curve(c[0] + a * np.cos(t), c[1] + b * np.sin(t), name=f"ellipse({a:g},{b:g})")


def dumbbell(a: float, b: float, neck: float, center=(0.0, 0.0), n: int = 512) -> InterfaceGeometry:
    """Two lobes at x = +-a joined through a neck of width 2 b neck at x = 0."""
    if not 0 < neck < 1:
        raise ParameterError(f"neck ratio must lie in (0, 1), got {neck}")
    t = 2.0 * np.pi * np.arange(n) / n
    c = np.asarray(center, dtype=float)
    x = c[0] + a * np.cos(t)
    y = c[1] + b * np.sin(t) * (neck + (1.0 - neck) * np.cos(t) ** 2)
    return parametric_curve(x, y, name=f"dumbbell(a={a:g}, b={b:g}, neck={neck:g})")


def perturbed_circle(R: float, center, amplitudes: dict, n: int = 512) -> InterfaceGeometry:
    """r(t) = R (1 + sum_k a_k cos(k t + phase_k)); amplitudes maps k -> (a_k, phase_k)."""
    t = 2.0 * np.pi * np.arange(n) / n
    r = np.ones(n)
    for k, (amp, phase) in amplitudes.items():
        r = r + amp * np.cos(int(k) * t + phase)
    c = np.asarray(center, dtype=float)
    return parametric_curve(c[0] + R * r * np.cos(t), c[1] + R * r * np.sin(t), name=f"perturbed-circle(R={R:g})")


def spline_curve(points, n: int = 512, smoothing: float = 0.0) -> InterfaceGeometry:
    """Periodic cubic spline through control points (counter-clockwise)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
        raise ParameterError("spline curve needs at least four (x, y) control points")
    closed = np.vstack([pts, pts[:1]])
    tck, _ = splprep([closed[:, 0], closed[:, 1]], s=smoothing, per=1)
    t = np.arange(n) / n
    xy = np.array(splev(t, tck))
    d1 = np.array(splev(t, tck, der=1))
    d2 = np.array(splev(t, tck, der=2))
    return from_samples(xy, d1, d2, 1.0 / n, name="spline")


def sphere_family(radii, d: int = 3) -> InterfaceGeometry:
    R = np.asarray(radii, dtype=float)
    if np.any(R <= 0):
        raise ParameterError("sphere radii must be positive")
    if d < 2:
        raise ParameterError(f"dimension must be at least 2, got {d}")
    return InterfaceGeometry(
        kind=GeometryKind.SPHERES,
        H0=(d - 1) / R,
        H1=-(d - 1) / R ** 2,
        ds=sphere_area(R, d),
        radii=R,
        dim=d,
        name=f"spheres(d={d})",
    )
