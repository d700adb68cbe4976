from app.services.geoflow.curve import curve_willmore, project_gamma, reparametrize, willmore_velocity
from app.services.geoflow.radial import (
    b2_dot_m,
    critical_curvature,
    equal_radius_jacobian,
    jacobian_verdict,
    radial_velocity,
    radial_willmore,
    stability_K,
)
from app.services.geoflow.tau1 import curvature_square_integral, tau1_flow
