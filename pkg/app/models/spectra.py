from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from app.models.base import Base


# =========================================================
# 1. EIGENPAIRS
# =========================================================
@dataclass(frozen=True, eq=False)
class EigenResult(Base):
    """
    values sorted descending; vectors (m, k) orthonormal in the
    trapezoid-weighted inner product of the grid.
    """

    values: np.ndarray
    vectors: np.ndarray
    method: str
    json_exclude = ("vectors",)


# =========================================================
# 2. COLLISION EIGENVALUES
# =========================================================
@dataclass(frozen=True, eq=False)
class CollisionEigen(Base):
    value: float
    interval: int
    localization: float
    scaled: float
    nu_ref: float
    nu_orbit: float


# =========================================================
# 3. SPECTRAL REPORT
# =========================================================
@dataclass(frozen=True, eq=False)
class SpectralReport(Base):
    """
    WHY NEEDED:
    - collects the collision-eigenvalue check for one profile:
      intervals where the orbit sits in the band, the top of the spectrum,
      localization of each large eigenvalue and the limit-operator values.
    """

    z: np.ndarray
    delta: Optional[float]
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    method: str
    collision_intervals: list
    junction_intervals: list
    tail_intervals: list
    collision_eigs: list
    nu_refs: list
    nu_orbits: list
    kernel_residual: float
    essential_edge: float
    cutoff: float
    counts: dict = field(default_factory=dict)
    theorem_check: bool = False
    json_exclude = ("z", "eigenvectors")


# =========================================================
# 4. PEARLING PREDICTION
# =========================================================
@dataclass(frozen=True, eq=False)
class PearlingPrediction(Base):
    eigenvalue: float
    k_star: float
    modes: list
