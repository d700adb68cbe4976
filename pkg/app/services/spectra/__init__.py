from app.services.spectra.collision import collision_analysis, collision_intervals, limit_operators
from app.services.spectra.eigen import eigen_top
from app.services.spectra.limit_operator import LimitCollisionOperator, LimitForm
from app.services.spectra.linearization import (
    Linearization,
    assemble_linearization,
    constant_operator,
    essential_edge,
    kernel_residual,
)
from app.services.spectra.pearling import pearling_predictor
