from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    # -----------------------------
    # PARALLELISM
    # -----------------------------
    MFCH_THREADS: int = Field(1, ge=1, env="MFCH_THREADS")

    # -----------------------------
    # OUTPUT
    # -----------------------------
    MFCH_OUTPUT_DIR: str = Field("runs", env="MFCH_OUTPUT_DIR")
    MFCH_LOG_LEVEL: str = Field("INFO", env="MFCH_LOG_LEVEL")

    # -----------------------------
    # NEWTON (homoclinic collocation)
    # -----------------------------
    MFCH_NEWTON_MAXITER: int = 50
    MFCH_NEWTON_TOL: float = 1e-10

    # -----------------------------
    # EIGENSOLVER
    # -----------------------------
    MFCH_DENSE_EIG_CUTOFF: int = 8000

    # -----------------------------
    # ODE INTEGRATION (geometric flows)
    # -----------------------------
    MFCH_ODE_RTOL: float = 1e-10
    MFCH_ODE_ATOL: float = 1e-12

    class Config:
        env_file = ".env"
        extra = "ignore"


settings = Settings()
