from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from app.models.base import Base


# =========================================================
# 1. HOMOCLINIC PROFILE
# =========================================================
@dataclass(frozen=True, eq=False)
class HomoclinicProfile(Base):
    """
    Gridded orbit homoclinic to the far-field state.

    u, du have shape (N, n) on the uniform grid z of n nodes.
    melnikov_a is the drift coefficient a of the continued problem
    (a0 for epsilon = 0 once computed by the Melnikov quadrature).
    """

    z: np.ndarray
    u: np.ndarray
    du: np.ndarray
    far_field: np.ndarray
    melnikov_a: float
    epsilon: float
    M: np.ndarray
    M1: float
    M2: float
    residual_norm: float
    collision_times: list = field(default_factory=list)
    delta: Optional[float] = None
    drift: float = 0.0
    potential_tag: str = ""
    mollifier_tag: str = ""
    json_exclude = ("z", "u", "du")

    @property
    def h(self) -> float:
        return float(self.z[1] - self.z[0])

    @property
    def n_nodes(self) -> int:
        return int(self.z.size)

    @property
    def dim(self) -> int:
        return int(self.u.shape[0])

    @property
    def L(self) -> float:
        return float(0.5 * (self.z[-1] - self.z[0]))

    def with_melnikov(self, a: float) -> "HomoclinicProfile":
        return replace(self, melnikov_a=float(a))


# =========================================================
# 2. CORRECTORS
# =========================================================
@dataclass(frozen=True, eq=False)
class CorrectorPair(Base):
    """
    zeta_h solves L0 zeta = (eta2 - eta1) grad W(phi_h) + m,
    phi_h1 solves L0 phi_h1 = -(V(phi_h) + a0 phi_h'), both orthogonal
    to phi_h'. E = -(Hess W(0))^{-1} m, B = (Hess W(0))^{-2} m.
    """

    z: np.ndarray
    zeta_h: np.ndarray
    phi_h1: np.ndarray
    E: np.ndarray
    B: np.ndarray
    a0: float
    solvability: dict = field(default_factory=dict)
    json_exclude = ("z", "zeta_h", "phi_h1")


# =========================================================
# 3. FAMILY SWEEP
# =========================================================
@dataclass(frozen=True, eq=False)
class FamilySweep(Base):
    """
    WHY NEEDED:
    - the universal billiard carries a one-parameter family of homoclinics;
      a second near-zero singular value flags the extra kernel direction.
    """

    thetas: list
    profiles: list
    singular_values: list
    extra_kernel: list
    complete: bool
    failure: str = ""
    json_exclude = ("profiles",)
