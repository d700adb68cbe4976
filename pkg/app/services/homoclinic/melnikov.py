import numpy as np

from app.models.profile import HomoclinicProfile
from app.services.potentials.perturbation import SolenoidalPerturbation
from app.utils.exceptions import ParameterError
from app.utils.helpers import trapz_uniform


def melnikov_a0(profile: HomoclinicProfile, V: SolenoidalPerturbation) -> float:
    """a0 = -(1/M1) int V(phi) . phi' dz by the trapezoid rule."""
    if profile.epsilon != 0.0:
        raise ParameterError("the Melnikov parameter a0 is defined on the unperturbed profile")
    if profile.M1 <= 0:
        raise ParameterError("profile has M1 <= 0")
    if V.is_zero:
        return 0.0
    integrand = np.sum(V.value_batch(profile.u) * profile.du, axis=0)
    return -float(trapz_uniform(integrand, profile.h)) / profile.M1
