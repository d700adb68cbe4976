from app.services.homoclinic.collocation import CollocationSystem, newton_collocation, smallest_singular_values
from app.services.homoclinic.continuation import continue_delta, continue_epsilon, far_field_equilibrium
from app.services.homoclinic.correctors import BorderedOperator, correctors
from app.services.homoclinic.family import family_sweep
from app.services.homoclinic.melnikov import melnikov_a0
from app.services.homoclinic.solver import (
    evenness_defect,
    hamiltonian_residual,
    moment_first,
    resample,
    solve_homoclinic,
)
