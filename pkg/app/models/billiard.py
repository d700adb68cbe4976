from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from app.models.base import Base


class SegmentKind(str, Enum):
    RADIAL_OUT = "radial-out"
    STRAIGHT = "straight"
    RADIAL_IN = "radial-in"


# =========================================================
# 1. COLLISION EVENT
# =========================================================
@dataclass(frozen=True, eq=False)
class CollisionEvent(Base):
    """
    Specular reflection at the collision curve.

    normal points into the plateau (direction of grad rho);
    normal_speed Z = v . grad rho with v = (v_plus - v_minus)/2.
    """

    time: float
    point: np.ndarray
    normal: np.ndarray
    grad_rho: np.ndarray
    v_minus: np.ndarray
    v_plus: np.ndarray
    normal_speed: float


# =========================================================
# 2. SEGMENTS
# =========================================================
@dataclass(frozen=True, eq=False)
class Segment(Base):
    kind: SegmentKind
    start: np.ndarray
    end: np.ndarray
    t_start: float
    t_end: float
    direction: np.ndarray
    speed: float


# =========================================================
# 3. TRAJECTORY
# =========================================================
@dataclass(frozen=True, eq=False)
class BilliardHomoclinic(Base):
    """
    Billiard-limit trajectory leaving the origin along `exit_angle`.

    WHY is_homoclinic:
    - tracing also returns failed attempts (missed origin, left the
      simplex, too many collisions) so perturbation studies can read
      `return_miss` off non-homoclinic runs.
    """

    segments: list[Segment]
    collisions: list[CollisionEvent]
    exit_angle: float
    entry_angle: Optional[float]
    is_homoclinic: bool
    reason: str
    return_miss: float
    speed_plateau: float
    r_min: float = 1e-8
    quadrant_time: float = field(default=0.0)

    @property
    def n_collisions(self) -> int:
        return len(self.collisions)

    @property
    def collision_points(self) -> np.ndarray:
        return np.array([c.point for c in self.collisions]).reshape(-1, 2)
