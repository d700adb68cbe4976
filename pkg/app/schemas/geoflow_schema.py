from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from app.schemas.interface_schema import CurveConfig


# -------------------------------------------------
# RADIAL FAMILIES
# -------------------------------------------------
class RadialConfig(BaseModel):
    radii: list[float] = Field(default_factory=lambda: [1.0, 0.8], min_length=1)
    d: Literal[2, 3] = 3
    a0: float = 1.0
    t_end: float = Field(50.0, gt=0)
    extinction_ratio: float = Field(1e-4, gt=0, lt=1)
    samples: int = Field(501, ge=2)

    class Config:
        extra = "forbid"
        frozen = True

    @field_validator("radii")
    @classmethod
    def positive_radii(cls, value):
        if min(value) <= 0:
            raise ValueError("radii must be positive")
        return value


# -------------------------------------------------
# TAU1 QUENCH
# -------------------------------------------------
class Tau1Config(BaseModel):
    radii: list[float] = Field(default_factory=lambda: [1.0], min_length=1)
    d: Literal[2, 3] = 2
    # background vector B1 at tau1 = 0
    B1: list[float] = Field(default_factory=lambda: [0.1, 0.0], min_length=1)
    domain_area: float = Field(4.0 * np.pi ** 2, gt=0)
    t_end: float = Field(50.0, gt=0)
    samples: int = Field(501, ge=2)

    class Config:
        extra = "forbid"
        frozen = True


# -------------------------------------------------
# CURVES
# -------------------------------------------------
class CurveFlowConfig(BaseModel):
    curve: CurveConfig = Field(default_factory=lambda: CurveConfig(kind="ellipse", a=1.0, b=0.5, n_nodes=256))
    a0: float = 0.0
    dt: float = Field(1e-4, gt=0)
    t_end: float = Field(0.05, gt=0)
    l0: Optional[float] = Field(None, gt=0)
    snapshot_every: int = Field(50, ge=1)

    class Config:
        extra = "forbid"
        frozen = True

    @field_validator("curve")
    @classmethod
    def resolved_curve(cls, value):
        if value.n_nodes < 128:
            raise ValueError("curve flows need at least 128 nodes")
        return value


# -------------------------------------------------
# GEOFLOW
# -------------------------------------------------
class GeoflowConfig(BaseModel):
    # profile moments; when absent they are taken from a solved profile
    M1: Optional[float] = Field(None, gt=0)
    M2: Optional[float] = Field(None, gt=0)
    M: Optional[list[float]] = None
    radial: RadialConfig = Field(default_factory=RadialConfig)
    tau1: Tau1Config = Field(default_factory=Tau1Config)
    curve: CurveFlowConfig = Field(default_factory=CurveFlowConfig)

    class Config:
        extra = "forbid"
        frozen = True
