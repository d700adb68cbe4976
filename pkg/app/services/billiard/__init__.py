from app.services.billiard.raytrace import BlendedArcLevelSet, raytrace_collision_curve
from app.services.billiard.reflection import reflect
from app.services.billiard.tracer import RadialTransit, trace_homoclinic
from app.services.billiard.trajectory import (
    collision_sign_changes,
    enclosed_area,
    mollified_guess,
    sample_trajectory,
)
from app.services.billiard.transversality import TransversalityReport, verify_transversality_proxy
