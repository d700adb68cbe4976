from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


# -------------------------------------------------
# TIME STEPPING
# -------------------------------------------------
class SolverConfig(BaseModel):
    dt: float = Field(1e-4, gt=0)
    t_end: float = Field(0.1, gt=0)
    scheme: Literal["semi-implicit", "stabilized"] = "stabilized"
    # None: 2 (max Hessian eigenvalue along the initial field)^2 when stabilized
    sigma: Optional[float] = Field(None, ge=0)
    snapshot_every: int = Field(0, ge=0)
    dealias: bool = True
    max_halvings: int = Field(10, ge=0)
    energy_tol: float = Field(1e-10, ge=0)

    class Config:
        extra = "forbid"
        frozen = True

    @model_validator(mode="after")
    def sigma_matches_scheme(self):
        if self.scheme == "semi-implicit" and self.sigma not in (None, 0.0):
            raise ValueError("the plain semi-implicit scheme takes no stabilization constant")
        return self


# -------------------------------------------------
# PEARLING
# -------------------------------------------------
class PearlingConfig(BaseModel):
    offsets: list[Literal["above", "tuned", "below"]] = Field(default_factory=lambda: ["above", "tuned", "below"])
    # relative mass change is +-offset_scale * epsilon
    offset_scale: float = Field(0.5, gt=0)
    seed_amplitude: float = Field(1e-3, ge=0)
    seed_modes: list[int] = Field(default_factory=lambda: list(range(2, 16)))
    growth_flag: float = Field(10.0, gt=1)
    quiet_flag: float = Field(2.0, gt=1)

    class Config:
        extra = "forbid"
        frozen = True
