from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import quad

from app.utils.exceptions import ParameterError


class MollifierKind(str, Enum):
    POLYNOMIAL = "polynomial-bump"
    STANDARD = "standard-bump"


def _bump(t: float) -> float:
    return float(np.exp(-1.0 / (1.0 - t * t))) if abs(t) < 1.0 else 0.0


@dataclass(frozen=True)
class Mollifier:
    """
    Even, nonnegative bump supported on [-1, 1] with unit integral.

    POLYNOMIAL: h(t) = 15/16 (1 - t^2)^2, closed-form primitive, C^1.
    STANDARD:   h(t) = exp(-1/(1 - t^2)) / Z, C^inf, primitive by quadrature.
    """

    kind: MollifierKind = MollifierKind.POLYNOMIAL
    normalization: float = field(init=False)

    def __post_init__(self):
        if self.kind == MollifierKind.POLYNOMIAL:
            norm = 15.0 / 16.0
        else:
            total, _ = quad(_bump, -1.0, 1.0, epsabs=1e-14, epsrel=1e-14)
            norm = 1.0 / total
        object.__setattr__(self, "normalization", norm)

    @property
    def tag(self) -> str:
        return self.kind.value

    @property
    def smoothness(self) -> int:
        # order of continuity of h itself
        return 1 if self.kind == MollifierKind.POLYNOMIAL else 10**6

    # -------------------------------------------------
    # VALUE
    # -------------------------------------------------
    def value(self, t):
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) < 1.0
        out = np.zeros_like(t)
        if self.kind == MollifierKind.POLYNOMIAL:
            out[inside] = self.normalization * (1.0 - t[inside] ** 2) ** 2
        else:
            ti = t[inside]
            out[inside] = self.normalization * np.exp(-1.0 / (1.0 - ti * ti))
        return out

    # -------------------------------------------------
    # PRIMITIVE  H(t) = int_{-1}^{t} h
    # -------------------------------------------------
    def primitive(self, t):
        t = np.asarray(t, dtype=float)
        tc = np.clip(t, -1.0, 1.0)
        if self.kind == MollifierKind.POLYNOMIAL:
            return self.normalization * (tc - 2.0 * tc ** 3 / 3.0 + tc ** 5 / 5.0) + 0.5

        flat = tc.reshape(-1)
        out = np.empty_like(flat)
        for i, x in enumerate(flat):
            if x <= -1.0:
                out[i] = 0.0
            elif x >= 1.0:
                out[i] = 1.0
            elif x <= 0.0:
                out[i] = self.normalization * quad(_bump, -1.0, x, epsabs=1e-14)[0]
            else:
                out[i] = 1.0 - self.normalization * quad(_bump, x, 1.0, epsabs=1e-14)[0]
        return out.reshape(tc.shape)

    # -------------------------------------------------
    # DERIVATIVE
    # -------------------------------------------------
    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) < 1.0
        out = np.zeros_like(t)
        ti = t[inside]
        if self.kind == MollifierKind.POLYNOMIAL:
            out[inside] = -4.0 * self.normalization * ti * (1.0 - ti ** 2)
        else:
            s = 1.0 - ti * ti
            out[inside] = self.normalization * np.exp(-1.0 / s) * (-2.0 * ti / s ** 2)
        return out


def smooth_jump(delta: float, rho, b_plus: float, b_minus: float, mollifier: Mollifier):
    """
    Mollified jump from -b_minus (rho <= -delta) to b_plus (rho >= delta).

    Returns (value, first derivative, second derivative) in rho.
    """
    if not delta > 0:
        raise ParameterError(f"smoothing width delta must be positive, got {delta}")

    rho = np.asarray(rho, dtype=float)
    t = rho / delta
    jump = b_plus + b_minus
    value = -b_minus + jump * mollifier.primitive(t)
    d1 = jump * mollifier.value(t) / delta
    d2 = jump * mollifier.derivative(t) / delta ** 2
    return value, d1, d2
