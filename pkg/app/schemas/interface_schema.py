from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator


# -------------------------------------------------
# CURVE
# -------------------------------------------------
class CurveConfig(BaseModel):
    kind: Literal["circle", "ellipse", "dumbbell", "perturbed-circle", "spline"] = "circle"
    center: list[float] = Field(default_factory=lambda: [np.pi, np.pi], min_length=2, max_length=2)
    radius: float = Field(1.0, gt=0)
    a: float = Field(1.0, gt=0)
    b: float = Field(0.5, gt=0)
    neck: float = Field(0.3, gt=0, lt=1)
    # mode -> [amplitude, phase]
    amplitudes: dict[int, list[float]] = Field(default_factory=dict)
    points: list[list[float]] = Field(default_factory=list)
    smoothing: float = Field(0.0, ge=0)
    n_nodes: int = Field(512, ge=64)

    class Config:
        extra = "forbid"
        frozen = True

    @model_validator(mode="after")
    def spline_points(self):
        if self.kind == "spline" and len(self.points) < 4:
            raise ValueError("spline curves need at least four control points")
        return self


# -------------------------------------------------
# DRESSING
# -------------------------------------------------
class InterfaceConfig(BaseModel):
    curve: CurveConfig = Field(default_factory=CurveConfig)
    lengths: list[float] = Field(default_factory=lambda: [2.0 * np.pi, 2.0 * np.pi], min_length=2, max_length=2)
    shape: list[int] = Field(default_factory=lambda: [256, 256], min_length=2, max_length=2)
    l0: float = Field(0.3, gt=0)
    # energy-check ladder; cells per epsilon stay fixed across it
    epsilons: list[float] = Field(default_factory=lambda: [0.1, 0.05, 0.025])
    cells_per_epsilon: Optional[int] = Field(None, ge=8)
    quasi_minimizer_C: Optional[float] = None

    class Config:
        extra = "forbid"
        frozen = True

    @model_validator(mode="after")
    def positive_box(self):
        if min(self.lengths) <= 0 or min(self.shape) < 8:
            raise ValueError("domain lengths must be positive and each grid axis needs at least 8 cells")
        return self
