from typing import Optional

from pydantic import BaseModel, Field

from app.schemas.flow_schema import PearlingConfig, SolverConfig
from app.schemas.geoflow_schema import GeoflowConfig
from app.schemas.interface_schema import InterfaceConfig
from app.schemas.model_schema import ModelParams
from app.schemas.potential_schema import PotentialConfig
from app.schemas.profile_schema import ProfileConfig, SpectraConfig


# -------------------------------------------------
# TOLERANCE OVERRIDES
# -------------------------------------------------
class Tolerances(BaseModel):
    newton_tol: Optional[float] = Field(None, gt=0)
    newton_maxiter: Optional[int] = Field(None, ge=1)
    ode_rtol: Optional[float] = Field(None, gt=0)
    ode_atol: Optional[float] = Field(None, gt=0)

    class Config:
        extra = "forbid"
        frozen = True


# -------------------------------------------------
# RUN
# -------------------------------------------------
class RunConfig(BaseModel):
    """One JSON document per run; every block has defaults except the model parameters."""

    params: ModelParams
    potential: Optional[PotentialConfig] = None
    profile: ProfileConfig = Field(default_factory=ProfileConfig)
    spectra: SpectraConfig = Field(default_factory=SpectraConfig)
    interface: InterfaceConfig = Field(default_factory=InterfaceConfig)
    flow: SolverConfig = Field(default_factory=SolverConfig)
    pearling: PearlingConfig = Field(default_factory=PearlingConfig)
    geoflow: GeoflowConfig = Field(default_factory=GeoflowConfig)
    output_dir: Optional[str] = None
    seed: int = Field(0, ge=0)
    tolerances: Tolerances = Field(default_factory=Tolerances)

    class Config:
        extra = "forbid"
        frozen = True
