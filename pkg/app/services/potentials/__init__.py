from app.services.potentials.base import Potential, eval_potential
from app.services.potentials.billiard_potential import (
    BilliardPotential,
    BilliardSpec,
    LevelSet,
    RegionLabel,
    RegularizedBilliard,
    UniversalLevelSet,
    classify_region,
    max_smoothing_width,
    universal_billiard,
)
from app.services.potentials.checks import finite_difference_gradient_check
from app.services.potentials.mollifier import Mollifier, MollifierKind, smooth_jump
from app.services.potentials.perturbation import (
    SolenoidalPerturbation,
    rotational_perturbation,
    zero_perturbation,
)
from app.services.potentials.smooth import (
    SmoothPotential,
    decoupled_test_potential,
    quadratic_potential,
)
