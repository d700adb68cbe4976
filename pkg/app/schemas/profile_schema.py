from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field


# -------------------------------------------------
# HOMOCLINIC PROFILE
# -------------------------------------------------
class ProfileConfig(BaseModel):
    """
    Smooth potentials are solved from the closed-form guess on [-L, L];
    billiards are traced at exit_angle and continued in delta.
    """

    half_length: Optional[float] = Field(None, gt=0)
    n_nodes: Optional[int] = Field(None, ge=101)
    richardson: bool = True
    check_kernel: bool = True
    exit_angle: float = Field(np.pi / 4, ge=0, le=np.pi / 2)
    nodes_per_delta: int = Field(40, ge=8)
    max_collisions: int = Field(8, ge=1)
    continue_epsilon: bool = False
    sweep_thetas: list[float] = Field(default_factory=list)

    class Config:
        extra = "forbid"
        frozen = True


# -------------------------------------------------
# SPECTRA
# -------------------------------------------------
class SpectraConfig(BaseModel):
    k: Optional[int] = Field(None, ge=1)
    cutoff_factor: float = Field(0.25, gt=0)
    cutoff_sweep: list[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 1.0])
    deltas: list[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05])
    geometry: Literal["circle", "flat"] = "circle"
    geometry_size: float = Field(1.0, gt=0)

    class Config:
        extra = "forbid"
        frozen = True
