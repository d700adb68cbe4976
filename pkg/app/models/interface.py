from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import gamma

from app.models.base import Base
from app.schemas.model_schema import ModelParams


class GeometryKind(str, Enum):
    CURVE = "curve"
    SPHERES = "spheres"


def sphere_area(R, d: int):
    """Area of the (d-1)-sphere of radius R."""
    return 2.0 * np.pi ** (d / 2.0) / gamma(d / 2.0) * np.asarray(R, dtype=float) ** (d - 1)


# =========================================================
# 1. INTERFACE GEOMETRY
# =========================================================
@dataclass(frozen=True, eq=False)
class InterfaceGeometry(Base):
    """
    Closed planar curve sampled at n nodes, or a family of spheres in R^d.

    WHY NEEDED:
    - points, normal (outward), curvature k and arclength weights ds for
      curves; radii and dimension for spheres.
    - H0 = k, H1 = -k^2 on curves; H0 = (d-1)/R, H1 = -(d-1)/R^2 on spheres.
    """

    kind: GeometryKind
    H0: np.ndarray
    H1: np.ndarray
    ds: np.ndarray
    points: Optional[np.ndarray] = None
    normal: Optional[np.ndarray] = None
    curvature: Optional[np.ndarray] = None
    radii: Optional[np.ndarray] = None
    dim: int = 2
    center: Optional[np.ndarray] = None
    circle_radius: Optional[float] = None
    name: str = "curve"
    json_exclude = ("points", "normal", "curvature", "ds", "H0", "H1")

    @property
    def n_nodes(self) -> int:
        return int(self.ds.size)

    @property
    def area(self) -> float:
        """|Gamma|: curve length in d = 2, total sphere area otherwise."""
        return float(np.sum(self.ds))

    @property
    def is_circle(self) -> bool:
        return self.circle_radius is not None

    def integrate(self, values) -> float:
        return float(np.sum(np.asarray(values) * self.ds))


# =========================================================
# 2. FIELD STATE
# =========================================================
@dataclass(frozen=True, eq=False)
class FieldState(Base):
    """u has shape (N, n_x, n_y) on the periodic lattice x_j = j L_x / n_x."""

    u: np.ndarray
    lengths: tuple
    params: ModelParams
    time: float = 0.0
    json_exclude = ("u",)

    @property
    def N(self) -> int:
        return int(self.u.shape[0])

    @property
    def shape(self) -> tuple:
        return tuple(self.u.shape[1:])

    @property
    def spacing(self) -> tuple:
        return tuple(L / n for L, n in zip(self.lengths, self.shape))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def domain_area(self) -> float:
        return float(np.prod(self.lengths))

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        axes = [np.arange(n) * h for n, h in zip(self.shape, self.spacing)]
        return np.meshgrid(*axes, indexing="ij")

    def with_field(self, u: np.ndarray, time: Optional[float] = None) -> "FieldState":
        return replace(self, u=u, time=self.time if time is None else float(time))


# =========================================================
# 3. ADMISSIBILITY
# =========================================================
@dataclass(frozen=True, eq=False)
class AdmissibilityReport(Base):
    passed: bool
    curvature_bound: float
    curvature_ok: bool
    whiskers_ok: bool
    offending_pairs: list = field(default_factory=list)
