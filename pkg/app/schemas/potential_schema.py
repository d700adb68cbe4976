from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator


# -------------------------------------------------
# BASE
# -------------------------------------------------
class PotentialBase(BaseModel):
    # smoothing width; None keeps the unregularized billiard
    delta: Optional[float] = Field(None, gt=0)
    mollifier: Literal["polynomial-bump", "standard-bump"] = "polynomial-bump"

    class Config:
        extra = "forbid"
        frozen = True


# -------------------------------------------------
# BILLIARDS
# -------------------------------------------------
class UniversalPotentialConfig(PotentialBase):
    kind: Literal["universal"]
    c: float = Field(..., gt=0, le=0.875)
    tip_rounding: float = Field(0.0, ge=0)


class RaytracedPotentialConfig(PotentialBase):
    kind: Literal["raytraced"]
    c1: list[float] = Field(..., min_length=2, max_length=2)
    c2: list[float] = Field(..., min_length=2, max_length=2)
    arc_halfwidth: Optional[float] = Field(None, gt=0)
    arc_radius: float = Field(2.0, gt=0)
    R0: float = Field(0.3, gt=0, lt=1)
    b_plus: float = Field(0.25, gt=0)
    b_minus: float = Field(0.25, gt=0)
    simplex_size: float = Field(1.0, gt=0)


# -------------------------------------------------
# SMOOTH
# -------------------------------------------------
class DecoupledPotentialConfig(PotentialBase):
    kind: Literal["decoupled"]


class QuadraticPotentialConfig(PotentialBase):
    kind: Literal["quadratic"]
    A: list[list[float]]

    @field_validator("A")
    @classmethod
    def symmetric_positive(cls, value):
        A = np.asarray(value, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A must be a square matrix")
        if not np.allclose(A, A.T) or np.min(np.linalg.eigvalsh(A)) <= 0:
            raise ValueError("A must be symmetric positive definite")
        return value


PotentialConfig = Annotated[
    Union[
        UniversalPotentialConfig,
        RaytracedPotentialConfig,
        DecoupledPotentialConfig,
        QuadraticPotentialConfig,
    ],
    Field(discriminator="kind"),
]
