import numpy as np
import pytest

from app.api.commands.reproduce_commands import SPECTRA_LADDER
from app.schemas.run_schema import RunConfig
from app.services.homoclinic import continue_delta
from app.services.homoclinic.collocation import to_vector
from app.services.homoclinic.homoclinic_service import HomoclinicService
from app.services.potentials import RegularizedBilliard
from app.services.potentials.potentials_service import PotentialService
from app.services.spectra import (
    LimitCollisionOperator,
    LimitForm,
    assemble_linearization,
    collision_analysis,
    constant_operator,
    eigen_top,
    essential_edge,
    kernel_residual,
    pearling_predictor,
)
from app.services.spectra.spectra_service import SpectraService
from app.utils.exceptions import ParameterError
from app.utils.helpers import cosine_similarity, fitted_order


@pytest.fixture(scope="module")
def linearization(sech_profile, decoupled):
    return assemble_linearization(sech_profile, decoupled)


# -------------------------------------------------
# LINEARIZATION ABOUT THE SMOOTH PROFILE
# -------------------------------------------------
def test_linearization_is_symmetric(linearization):
    assert linearization.asymmetry() < 1e-12


def test_top_eigenvalues_of_sech_profile(linearization):
    # 1.25, 0 and -0.75 are the bound states above the edge at -1
    result = eigen_top(linearization, 3)
    assert np.allclose(result.values, [1.25, 0.0, -0.75], atol=1e-3)
    assert np.all(np.diff(result.values) < 0)


def test_translation_mode_is_kernel(sech_profile, linearization):
    assert kernel_residual(sech_profile, linearization) < 1e-3


def test_zero_eigenvector_is_translation(sech_profile, linearization):
    result = eigen_top(linearization, 3)
    j = int(np.argmin(np.abs(result.values)))
    mode = linearization.to_grid(result.vectors[:, j])
    assert cosine_similarity(mode, to_vector(sech_profile.du)) >= 1.0 - 1e-6


def test_kernel_residual_is_second_order(make_config, decoupled):
    nodes = [1001, 2001, 4001]
    residuals = []
    for n in nodes:
        config = make_config(potential={"kind": "decoupled"}, profile={"half_length": 20.0, "n_nodes": n})
        profile = HomoclinicService().solve(config, decoupled)
        residuals.append(kernel_residual(profile, assemble_linearization(profile, decoupled)))

    spacing = [40.0 / (n - 1) for n in nodes]
    assert 1.7 <= fitted_order(spacing, residuals) <= 2.3


def test_eigen_top_rejects_k(linearization):
    with pytest.raises(ParameterError):
        eigen_top(linearization, 0)


# -------------------------------------------------
# ESSENTIAL SPECTRUM
# -------------------------------------------------
def test_essential_edge(decoupled):
    assert essential_edge(decoupled) == pytest.approx(-1.0)


def test_constant_block_stays_below_edge():
    top = eigen_top(constant_operator(2.0 * np.eye(2), 20.0, 801), 1).values[0]
    assert -2.1 < top < -2.0


def test_service_essential(decoupled):
    report = SpectraService().essential(decoupled, L=20.0, n_nodes=401)
    assert report["edge"] == pytest.approx(-1.0)
    assert report["constant_block_top"] < -1.0


# -------------------------------------------------
# LIMIT COLLISION OPERATOR
# -------------------------------------------------
@pytest.mark.parametrize("form", list(LimitForm))
def test_limit_operator_scalar_reduction(form):
    op = LimitCollisionOperator(0.5, 0.5, [1.0, 0.0], form=form, n_nodes=801)

    assert op.nu() > 0
    assert op.nu() == pytest.approx(op.nu_full(), abs=1e-8)
    assert op.positive_count() >= 1
    assert op.ground_state_sign_changes() == 0


def test_band_orbit_needs_turning_point():
    op = LimitCollisionOperator(1.0, 0.5, [1.0, 0.0], form=LimitForm.BAND_ORBIT)
    with pytest.raises(ParameterError):
        op.turning_point()


def test_limit_operator_needs_normal_speed():
    with pytest.raises(ParameterError):
        LimitCollisionOperator(0.0, 0.5, [1.0, 0.0])


# -------------------------------------------------
# PEARLING PREDICTOR
# -------------------------------------------------
def test_pearling_on_circle():
    (prediction,) = pearling_predictor(4.0, 0.2, "circle", 1.0)
    assert prediction.k_star == pytest.approx(10.0)
    assert prediction.modes == [10]


def test_pearling_on_flat_period():
    (prediction,) = pearling_predictor([4.0], 0.2, "flat", 2.0 * np.pi)
    assert prediction.k_star == pytest.approx(10.0)
    assert 10 in prediction.modes


@pytest.mark.parametrize(
    "lambdas, geometry",
    [
        (4.0, "sphere"),
        (-1.0, "circle"),
    ],
)
def test_pearling_rejects(lambdas, geometry):
    with pytest.raises(ParameterError):
        pearling_predictor(lambdas, 0.2, geometry, 1.0)


# -------------------------------------------------
# COLLISION ANALYSIS
# -------------------------------------------------
def test_collision_analysis_needs_billiard(sech_profile, decoupled):
    with pytest.raises(ParameterError):
        collision_analysis(sech_profile, decoupled)


@pytest.mark.slow
def test_single_collision_on_diagonal(universal):
    profile = continue_delta(universal, 0.005, exit_angle=np.pi / 4)
    report = collision_analysis(profile, RegularizedBilliard(universal, 0.005))

    assert len(report.collision_intervals) == 1
    assert report.nu_refs[0] > 0
    assert report.eigenvalues[0] > report.cutoff
    assert report.essential_edge < 0


@pytest.mark.slow
def test_delta_ladder_is_first_order(universal):
    config = RunConfig.model_validate(SPECTRA_LADDER)
    table, checks = SpectraService().ladder(config, RegularizedBilliard(universal, 0.2))

    assert sorted(set(table["delta"])) == [0.05, 0.1, 0.2]
    assert "error_reflected" in table.columns
    assert set(checks["orders_reflected"]) == set(checks["orders"])
    assert checks["orders"]
    assert all(order >= 0.8 for order in checks["orders"].values()), checks["orders"]


@pytest.mark.slow
def test_two_collisions_are_localized(make_config):
    config = make_config(
        potential={"kind": "raytraced", "c1": [0.55, 0.2], "c2": [0.2, 0.55], "delta": 0.05},
        profile={"exit_angle": float(np.arctan2(0.2, 0.55))},
    )
    pot = PotentialService().build(config.potential)
    report = collision_analysis(HomoclinicService().solve(config, pot), pot)

    assert len(report.collision_intervals) == 2
    assert report.theorem_check
    assert sorted(e.interval for e in report.collision_eigs) == [0, 1]
    assert all(e.localization >= 0.9 for e in report.collision_eigs)
