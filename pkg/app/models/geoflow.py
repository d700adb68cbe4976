from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from app.models.base import Base
from app.models.interface import InterfaceGeometry, sphere_area


# =========================================================
# 1. RADIAL SYSTEM
# =========================================================
@dataclass(frozen=True, eq=False)
class RadialSystem(Base):
    """
    m disjoint spheres (circles for d = 2) under the slow curvature flow.

    WHY NEEDED:
    - sum R_i^(d-1) is the conserved interfacial area, R_bar its equal-radius value.
    """

    radii: np.ndarray
    d: int
    a0: float
    M1: float
    M2: float

    @property
    def m(self) -> int:
        return int(np.size(self.radii))

    @property
    def conserved(self) -> float:
        return float(np.sum(np.asarray(self.radii) ** (self.d - 1)))

    @property
    def R_bar(self) -> float:
        return float(np.mean(np.asarray(self.radii) ** (self.d - 1)) ** (1.0 / (self.d - 1)))


@dataclass(frozen=True, eq=False)
class RadialTrajectory(Base):
    taus: np.ndarray
    radii: np.ndarray
    events: list
    conserved_drift: float
    b2_dot_m: np.ndarray
    survivors: list = field(default_factory=list)
    json_exclude = ("taus", "radii", "b2_dot_m")


# =========================================================
# 2. TAU1 QUENCH
# =========================================================
@dataclass(frozen=True, eq=False)
class Tau1State(Base):
    """
    Background vector B1, E = B1 . M and sphere radii at tau1 = 0.

    A is the Hessian of W at the origin; the mass constant
    |Omega| A^-2 B1 + gamma0 M is carried along the flow.
    """

    B1: np.ndarray
    radii: np.ndarray
    d: int
    domain_area: float
    M: np.ndarray
    M2: float
    A: np.ndarray

    @property
    def E(self) -> float:
        return float(np.dot(self.B1, self.M))

    @property
    def gamma0(self) -> float:
        return float(np.sum(sphere_area(self.radii, self.d)))

    @property
    def mass_constant(self) -> np.ndarray:
        A2_inv_B1 = np.linalg.solve(self.A, np.linalg.solve(self.A, self.B1))
        return self.domain_area * A2_inv_B1 + self.gamma0 * np.asarray(self.M)


@dataclass(frozen=True, eq=False)
class Tau1Trajectory(Base):
    taus: np.ndarray
    E: np.ndarray
    B1: np.ndarray
    radii: np.ndarray
    mass_residual: float
    monotone: bool
    extinct: bool
    json_exclude = ("taus", "E", "B1", "radii")

    @property
    def B1_final(self) -> np.ndarray:
        return self.B1[-1]


# =========================================================
# 3. CURVE FLOW
# =========================================================
@dataclass(frozen=True, eq=False)
class CurveTrajectory(Base):
    times: list
    lengths: list
    snapshots: list
    projection_defect: float
    final: InterfaceGeometry
    breakdown: Optional[str] = None
    json_exclude = ("snapshots", "final")
