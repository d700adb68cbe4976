from app.services.interface.admissibility import check_admissible, whisker_intersections
from app.services.interface.curves import (
    circle,
    dumbbell,
    ellipse,
    parametric_curve,
    perturbed_circle,
    sphere_family,
    spline_curve,
)
from app.services.interface.distance import signed_distance
from app.services.interface.dressing import dress
from app.services.interface.energy import (
    energy_full,
    energy_sharp,
    mass_full,
    mass_sharp,
    perturbation_for,
    pointwise_terms,
    quasi_minimizer_check,
)
from app.services.interface.spectral import SpectralGrid
