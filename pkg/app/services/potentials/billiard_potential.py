import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from app.services.potentials.base import Potential
from app.services.potentials.mollifier import Mollifier, smooth_jump
from app.utils.exceptions import DomainError, ParameterError, SpecInconsistencyError
from app.utils.helpers import smooth_step
from app.utils.validators import as_point

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)
SIMPLEX_TOL = 1e-12
# |grad rho| on the delta band when rho is a signed distance there
GRADIENT_NORM_WINDOW = (0.9, 1.1)


class RegionLabel(str, Enum):
    QUADRANT = "quadrant"
    BAND = "band"
    PLATEAU = "plateau"
    WELL = "well"


# =========================================================
# 1. LEVEL SETS OF THE COLLISION CURVE
# =========================================================
class LevelSet(ABC):
    """rho : R^2 -> R, positive on the plateau side of the collision curve."""

    name: str = "level-set"

    @abstractmethod
    def evaluate(self, U: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """rho (M,), gradient (2, M), Hessian (2, 2, M) on columns of U."""

    def at(self, u) -> tuple[float, np.ndarray, np.ndarray]:
        rho, grad, hess = self.evaluate(as_point(u, 2)[:, None])
        return float(rho[0]), grad[:, 0], hess[:, :, 0]


class UniversalLevelSet(LevelSet):
    """
    rho(u) = c - |u| - xi(y),  y = (u1 - u2)/sqrt(2).

    xi(y) = |y| when tip_rounding == 0, otherwise sqrt(y^2 + k^2) - k.
    Both agree on the diagonal, where |grad rho| = 1.
    """

    name = "universal"

    def __init__(self, c: float, tip_rounding: float = 0.0):
        self.c = float(c)
        self.tip_rounding = float(tip_rounding)

    def _xi(self, y):
        k = self.tip_rounding
        if k == 0.0:
            # rounding off the diagonal must not pick a branch
            sign = np.where(np.abs(y) > 1e-13, np.sign(y), 0.0)
            return np.abs(y), sign, np.zeros_like(y)
        s = np.sqrt(y * y + k * k)
        return s - k, y / s, k * k / s ** 3

    def evaluate(self, U):
        U = np.asarray(U, dtype=float)
        r = np.sqrt(U[0] ** 2 + U[1] ** 2)
        r_safe = np.maximum(r, 1e-12)
        uhat = U / r_safe
        y = (U[0] - U[1]) / SQRT2
        xi, dxi, d2xi = self._xi(y)
        e = np.array([1.0, -1.0]) / SQRT2

        rho = self.c - r - xi
        grad = -uhat - dxi * e[:, None]

        eye = np.eye(2)[:, :, None]
        outer_u = uhat[:, None, :] * uhat[None, :, :]
        ee = np.outer(e, e)[:, :, None]
        hess = -(eye - outer_u) / r_safe - d2xi * ee
        return rho, grad, hess


# =========================================================
# 2. RADIAL PROFILE b(r)
# =========================================================
class RadialProfile:
    """
    b(r) = r^2 on [0, core], quintic Hermite blend on [core, R0] matching
    value and two derivatives at both ends, constant b_plus beyond R0.
    """

    def __init__(self, core_radius: float, R0: float, b_plus: float):
        self.core_radius = core_radius
        self.R0 = R0
        self.b_plus = b_plus
        self.width = R0 - core_radius

        t = Polynomial([0.0, 1.0])
        H0 = 1 - 10 * t ** 3 + 15 * t ** 4 - 6 * t ** 5
        H1 = t - 6 * t ** 3 + 8 * t ** 4 - 3 * t ** 5
        H2 = 0.5 * (t ** 2 - 3 * t ** 3 + 3 * t ** 4 - t ** 5)
        H5 = 10 * t ** 3 - 15 * t ** 4 + 6 * t ** 5

        w, rc = self.width, core_radius
        self._blend = rc ** 2 * H0 + w * 2 * rc * H1 + w ** 2 * 2 * H2 + b_plus * H5
        self._d1 = self._blend.deriv(1)
        self._d2 = self._blend.deriv(2)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        b = np.full_like(r, self.b_plus)
        b1 = np.zeros_like(r)
        b2 = np.zeros_like(r)

        core = r <= self.core_radius
        b[core] = r[core] ** 2
        b1[core] = 2 * r[core]
        b2[core] = 2.0

        mid = (r > self.core_radius) & (r < self.R0)
        t = (r[mid] - self.core_radius) / self.width
        b[mid] = self._blend(t)
        b1[mid] = self._d1(t) / self.width
        b2[mid] = self._d2(t) / self.width ** 2
        return b, b1, b2

    def is_strictly_increasing(self, samples: int = 2001) -> bool:
        t = np.linspace(0.0, 1.0, samples)[1:-1]
        return bool(np.all(self._d1(t) > 0))


# =========================================================
# 3. BILLIARD SPEC
# =========================================================
@dataclass(frozen=True)
class BilliardSpec:
    """
    Birkhoff-billiard potential in N = 2 species.

    WHY core_radius:
    - b(r) = r^2 exactly on [0, core_radius]; the default is R0/3.

    WHY simplex_size:
    - the physical domain is {u >= 0, u1 + u2 <= simplex_size}; the
      universal family needs a simplex large enough to hold its collisions.
    """

    R0: float
    b_plus: float
    b_minus: float
    level_set: LevelSet
    core_radius: Optional[float] = None
    simplex_size: float = 1.0
    smoothness: int = 2
    name: str = "billiard"
    radial: RadialProfile = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.R0 < 1:
            raise ParameterError(f"R0 must lie in (0, 1), got {self.R0}")
        if self.b_plus <= 0 or self.b_minus <= 0:
            raise ParameterError("b_plus and b_minus must be positive")
        if self.smoothness < 2:
            raise ParameterError("smoothness order must be at least 2")

        core = self.R0 / 3.0 if self.core_radius is None else self.core_radius
        if not 0 < core < self.R0:
            raise ParameterError(f"core radius must lie in (0, R0), got {core}")
        object.__setattr__(self, "core_radius", float(core))

        radial = RadialProfile(core, self.R0, self.b_plus)
        if not radial.is_strictly_increasing():
            raise ParameterError("radial profile b(r) is not strictly increasing on [core, R0]")
        object.__setattr__(self, "radial", radial)

    # -------------------------------------------------
    # DOMAIN
    # -------------------------------------------------
    def in_simplex(self, U, tol: float = SIMPLEX_TOL) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        return (U[0] >= -tol) & (U[1] >= -tol) & (U[0] + U[1] <= self.simplex_size + tol)

    def require_simplex(self, U):
        inside = self.in_simplex(U)
        if not np.all(inside):
            bad = np.asarray(U, dtype=float)[:, ~inside][:, 0]
            raise DomainError(
                f"point {bad.tolist()} lies outside the simplex of size {self.simplex_size}"
            )

    # -------------------------------------------------
    # UNREGULARIZED POTENTIAL
    # -------------------------------------------------
    def exact_value(self, U) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        if U.ndim == 1:
            U = U[:, None]
        r = np.sqrt(U[0] ** 2 + U[1] ** 2)
        rho = self.level_set.evaluate(U)[0]
        b = self.radial.evaluate(r)[0]
        outside = np.where(rho > 0, self.b_plus, -self.b_minus)
        return np.where(r < self.R0, b, outside)


def universal_billiard(c: float, tip_rounding: float = 0.0) -> BilliardSpec:
    """
    Universal billiard: quadratic core |u|^2 for |u| <= 1/4, plateau 1/4,
    well depth 1/4, collision curve c - (|u| + |u1 - u2|/sqrt 2) = 0.
    """
    if not 0 < c <= 7.0 / 8.0:
        raise ParameterError(f"universal billiard needs c in (0, 7/8], got {c}")
    if tip_rounding < 0:
        raise ParameterError("tip rounding must be nonnegative")

    return BilliardSpec(
        R0=0.5,
        b_plus=0.25,
        b_minus=0.25,
        level_set=UniversalLevelSet(c, tip_rounding),
        core_radius=0.25,
        simplex_size=SQRT2 * c + 0.5,
        name=f"universal(c={c:g}, tip={tip_rounding:g})",
    )


# =========================================================
# 4. REGIONS AND SMOOTHING WIDTH
# =========================================================
def classify_region(spec: BilliardSpec, u, delta: float = 0.0) -> RegionLabel:
    u = as_point(u, 2)
    if np.hypot(u[0], u[1]) < spec.R0:
        return RegionLabel.QUADRANT
    rho = spec.level_set.at(u)[0]
    if delta > 0 and abs(rho) <= delta:
        return RegionLabel.BAND
    return RegionLabel.PLATEAU if rho > 0 else RegionLabel.WELL


def max_smoothing_width(spec: BilliardSpec, n_radii: int = 200, n_angles: int = 721) -> float:
    """
    Largest delta whose band stays clear of the quadrant region:
    the minimum of rho over the sampled disc |u| <= R0 inside the simplex.
    """
    r = np.linspace(0.0, spec.R0, n_radii)
    theta = np.linspace(0.0, 0.5 * np.pi, n_angles)
    R, T = np.meshgrid(r, theta, indexing="ij")
    U = np.stack([(R * np.cos(T)).ravel(), (R * np.sin(T)).ravel()])
    U = U[:, spec.in_simplex(U)]
    rho = spec.level_set.evaluate(U)[0]
    delta0 = float(np.min(rho))
    if delta0 <= 0:
        raise SpecInconsistencyError(
            f"collision curve of {spec.name} enters the quadrant region (min rho = {delta0:.3e})"
        )
    return delta0


def gradient_norm_range(spec: BilliardSpec, delta: float, samples: int = 4000, seed: int = 0):
    """Range of |grad rho| over random band points inside the simplex (diagnostic)."""
    rng = np.random.default_rng(seed)
    s = spec.simplex_size
    U = rng.uniform(0.0, s, size=(2, samples))
    U = U[:, spec.in_simplex(U) & (np.hypot(U[0], U[1]) >= spec.R0)]
    rho, grad, _ = spec.level_set.evaluate(U)
    band = np.abs(rho) <= delta
    if not np.any(band):
        return float("nan"), float("nan")
    norms = np.linalg.norm(grad[:, band], axis=0)
    return float(norms.min()), float(norms.max())


# =========================================================
# 5. POTENTIALS
# =========================================================
class BilliardPotential(Potential):
    """Unregularized billiard potential; smooth away from the collision curve."""

    dim = 2
    smoothness = 2

    def __init__(self, spec: BilliardSpec):
        self.spec = spec

    def is_jump_point(self, u, h: float) -> bool:
        u = as_point(u, 2)
        if np.hypot(u[0], u[1]) < self.spec.R0:
            return False
        rho, grad, _ = self.spec.level_set.at(u)
        return abs(rho) <= 2.0 * h * max(1.0, float(np.linalg.norm(grad)))

    def evaluate_batch(self, U, order=2):
        U = np.asarray(U, dtype=float)
        self.spec.require_simplex(U)
        r = np.sqrt(U[0] ** 2 + U[1] ** 2)
        value = self.spec.exact_value(U)
        grad = hess = None
        if order >= 1:
            _, b1, b2 = self.spec.radial.evaluate(r)
            quadrant = r < self.spec.R0
            grad, hess = _radial_derivatives(U, r, b1, b2, self.spec.core_radius)
            grad = np.where(quadrant, grad, 0.0)
            hess = np.where(quadrant, hess, 0.0)
        return value, grad, (hess if order >= 2 else None)


class RegularizedBilliard(Potential):
    """
    B_delta(u) = b(|u|) + q(|u|) (chi_delta(rho(u)) - b_plus).

    q is a smooth step from 0 on the quadratic core to 1 at R0, so B_delta
    equals b inside the quadrant region and chi_delta(rho) outside it.
    strict=False evaluates the formulas outside the simplex as well.
    """

    dim = 2

    def __init__(
        self,
        spec: BilliardSpec,
        delta: float,
        mollifier: Optional[Mollifier] = None,
        strict: bool = True,
    ):
        if not delta > 0:
            raise ParameterError(f"smoothing width delta must be positive, got {delta}")
        self.spec = spec
        self.delta = float(delta)
        self.mollifier = mollifier or Mollifier()
        self.strict = strict
        self.smoothness = min(spec.smoothness, self.mollifier.smoothness + 1)

        self.delta0 = max_smoothing_width(spec)
        if self.delta > self.delta0:
            logger.warning(
                "delta=%.4g exceeds the maximal smoothing width %.4g for %s; "
                "B_delta differs from b inside the quadrant region",
                self.delta, self.delta0, spec.name,
            )

        self.gradient_norms = gradient_norm_range(spec, self.delta)
        lo, hi = self.gradient_norms
        if np.isfinite(lo) and not (GRADIENT_NORM_WINDOW[0] <= lo and hi <= GRADIENT_NORM_WINDOW[1]):
            logger.warning(
                "|grad rho| spans [%.3g, %.3g] on the delta band of %s; rho is not a signed distance there",
                lo, hi, spec.name,
            )

    def lenient(self) -> "RegularizedBilliard":
        twin = RegularizedBilliard.__new__(RegularizedBilliard)
        twin.__dict__.update(self.__dict__)
        twin.strict = False
        return twin

    def count_outside(self, U) -> int:
        return int(np.count_nonzero(~self.spec.in_simplex(U)))

    def jump(self, rho):
        s = self.spec
        return smooth_jump(self.delta, rho, s.b_plus, s.b_minus, self.mollifier)

    def evaluate_batch(self, U, order=2):
        U = np.asarray(U, dtype=float)
        spec = self.spec
        if self.strict:
            spec.require_simplex(U)

        r = np.sqrt(U[0] ** 2 + U[1] ** 2)
        b, b1, b2 = spec.radial.evaluate(r)
        q, q1, q2 = smooth_step(r, spec.core_radius, spec.R0)
        rho, grho, hrho = spec.level_set.evaluate(U)
        chi, chi1, chi2 = self.jump(rho)
        g = chi - spec.b_plus

        value = b + q * g
        if order == 0:
            return value, None, None

        F1 = b1 + g * q1
        F2 = b2 + g * q2
        grad_r, hess_r = _radial_derivatives(U, r, F1, F2, spec.core_radius)
        grad = grad_r + q * chi1 * grho
        if order == 1:
            return value, grad, None

        r_safe = np.maximum(r, 1e-12)
        uhat = U / r_safe
        cross = chi1 * q1
        hess = (
            hess_r
            + cross * (uhat[:, None, :] * grho[None, :, :] + grho[:, None, :] * uhat[None, :, :])
            + q * (chi2 * grho[:, None, :] * grho[None, :, :] + chi1 * hrho)
        )
        return value, grad, hess


def _radial_derivatives(U, r, f1, f2, core_radius):
    """Gradient and Hessian of a radial function with derivatives f1, f2; exactly 2u, 2I on the core."""
    r_safe = np.maximum(r, 1e-12)
    uhat = U / r_safe
    outer = uhat[:, None, :] * uhat[None, :, :]
    eye = np.eye(2)[:, :, None]
    grad = f1 * uhat
    hess = f2 * outer + (f1 / r_safe) * (eye - outer)

    core = r <= core_radius
    if np.any(core):
        grad[:, core] = 2.0 * U[:, core]
        hess[:, :, core] = 2.0 * np.eye(2)[:, :, None]
    return grad, hess
