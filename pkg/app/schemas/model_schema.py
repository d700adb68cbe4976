from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator


# -------------------------------------------------
# MODEL PARAMETERS
# -------------------------------------------------
class ModelParams(BaseModel):
    """Physical parameters shared by the field-level modules."""

    epsilon: float = Field(..., gt=0, lt=1)
    eta1: float = 1.0
    eta2: float = 1.0
    m: list[float] = Field(default_factory=lambda: [0.0, 0.0])
    perturbation: Literal["zero", "rotational"] = "zero"

    @field_validator("m")
    @classmethod
    def finite_multiplier(cls, value):
        if not all(np.isfinite(value)):
            raise ValueError("multiplier vector must be finite")
        return value

    @property
    def m_vector(self) -> np.ndarray:
        return np.asarray(self.m, dtype=float)

    class Config:
        extra = "forbid"
        frozen = True
