import numpy as np
import pytest

from app.api.commands.reproduce_commands import CANHAM_HELFRICH
from app.models.interface import FieldState
from app.schemas.model_schema import ModelParams
from app.schemas.run_schema import RunConfig
from app.services.interface import (
    SpectralGrid,
    check_admissible,
    circle,
    dress,
    dumbbell,
    ellipse,
    energy_full,
    energy_sharp,
    mass_full,
    mass_sharp,
    parametric_curve,
    perturbed_circle,
    quasi_minimizer_check,
    signed_distance,
    sphere_family,
)
from app.services.homoclinic.homoclinic_service import HomoclinicService
from app.services.interface.interface_service import InterfaceService
from app.services.potentials import zero_perturbation
from app.utils.exceptions import ParameterError, ResolutionError, ShapeError

PARAMS = ModelParams(epsilon=0.1)


# -------------------------------------------------
# CURVES
# -------------------------------------------------
def test_circle_geometry():
    geom = circle(2.0, center=(1.0, -1.0), n=128)
    radii = np.hypot(geom.points[0] - 1.0, geom.points[1] + 1.0)

    assert np.allclose(radii, 2.0)
    assert geom.area == pytest.approx(4.0 * np.pi)
    assert geom.integrate(geom.curvature) == pytest.approx(2.0 * np.pi)
    assert np.allclose(geom.H1, -0.25)


def test_ellipse_length_and_total_curvature():
    geom = ellipse(1.0, 0.5, n=512)
    assert geom.area == pytest.approx(4.84422, abs=1e-5)
    assert geom.integrate(geom.curvature) == pytest.approx(2.0 * np.pi, abs=1e-10)
    assert np.allclose(np.linalg.norm(geom.normal, axis=0), 1.0)


def test_perturbed_circle_total_curvature():
    geom = perturbed_circle(1.0, (0.0, 0.0), {3: (0.05, 0.0)}, n=256)
    assert geom.integrate(geom.curvature) == pytest.approx(2.0 * np.pi, abs=1e-10)


def test_clockwise_curve_rejected():
    t = 2.0 * np.pi * np.arange(128) / 128
    with pytest.raises(ParameterError):
        parametric_curve(np.cos(-t), np.sin(-t))


def test_too_few_nodes():
    with pytest.raises(ParameterError):
        circle(1.0, n=16)


def test_sphere_family():
    geom = sphere_family([1.0, 2.0], d=3)
    assert np.allclose(geom.H0, [2.0, 1.0])
    assert geom.area == pytest.approx(4.0 * np.pi * 5.0)


# -------------------------------------------------
# ADMISSIBILITY
# -------------------------------------------------
def test_circle_admissibility():
    assert check_admissible(circle(1.0), 0.1, 0.2).passed
    report = check_admissible(circle(1.0), 0.1, 0.5)
    assert not report.passed
    assert not report.curvature_ok


def test_thin_neck_is_not_admissible():
    report = check_admissible(dumbbell(2.0, 1.0, 0.15), 0.05, 0.1)
    assert not report.passed


def test_sphere_admissibility():
    assert check_admissible(sphere_family([1.0], d=3), 0.1, 0.2).passed


# -------------------------------------------------
# SIGNED DISTANCE
# -------------------------------------------------
@pytest.mark.parametrize("offset", [0.05, -0.05])
def test_signed_distance_along_normal(offset):
    geom = ellipse(1.0, 0.5, n=512)
    shifted = geom.points + offset * geom.normal
    d = signed_distance(geom, shifted[0], shifted[1])
    assert np.allclose(d, offset, atol=1e-5)


def test_signed_distance_circle_is_exact():
    geom = circle(1.0, center=(1.5, 1.5))
    d = signed_distance(geom, np.array([1.5, 3.0]), np.array([1.5, 1.5]))
    assert np.allclose(d, [-1.0, 0.5])


# -------------------------------------------------
# DRESSING
# -------------------------------------------------
def test_dress_places_profile_on_curve(sech_profile):
    geom = circle(1.0, center=(1.5, 1.5))
    state = dress(geom, sech_profile, PARAMS, (3.0, 3.0), (256, 256), 0.15)

    assert state.shape == (256, 256)
    assert abs(np.max(state.u[0]) - 1.5) < 1e-2
    assert np.max(np.abs(state.u[1])) <= 1e-10
    assert state.u[0, 0, 0] == 0.0


def test_dress_rejects_coarse_grid(sech_profile):
    with pytest.raises(ResolutionError):
        dress(circle(1.0, center=(np.pi, np.pi)), sech_profile, PARAMS, (2 * np.pi, 2 * np.pi), (32, 32), 0.15)


def test_dress_rejects_short_profile(sech_profile):
    with pytest.raises(ParameterError):
        dress(circle(1.0, center=(1.5, 1.5)), sech_profile, PARAMS, (3.0, 3.0), (256, 256), 1.0)


# -------------------------------------------------
# ENERGY AND MASS
# -------------------------------------------------
def test_sharp_energy_of_unit_circle():
    assert energy_sharp(circle(1.0), 1.0, 1.2, PARAMS) == pytest.approx(-2.4 * np.pi * 0.1 ** 3)


def test_full_energy_of_constant_field(decoupled):
    u = np.zeros((2, 16, 16))
    u[0] = 0.5
    state = FieldState(u=u, lengths=(2.0, 2.0), params=PARAMS)
    # 1/2 (a - a^2)^2 - eps^2 W(a) at a = 1/2
    density = 0.5 * 0.25 ** 2 - 0.01 * (0.125 - 0.125 / 3.0)
    assert energy_full(state, decoupled, zero_perturbation()) == pytest.approx(4.0 * density)


def test_zero_field_has_zero_energy(decoupled):
    state = FieldState(u=np.zeros((2, 16, 16)), lengths=(2.0, 2.0), params=PARAMS)
    assert energy_full(state, decoupled) == 0.0


def test_mass_of_constant_field():
    state = FieldState(u=np.full((2, 8, 8), 0.5), lengths=(2.0, 2.0), params=PARAMS)
    assert np.allclose(mass_full(state), [20.0, 20.0])


def test_zero_field_is_quasi_minimizer(decoupled):
    state = FieldState(u=np.zeros((2, 16, 16)), lengths=(2.0, 2.0), params=PARAMS)
    check = quasi_minimizer_check(state, decoupled, 1.0)
    assert check["passed"]
    assert check["bound"] == pytest.approx(1e-3)


def test_sharp_mass_correction_is_first_order(sech_profile, decoupled):
    geom = circle(1.0)
    leading = geom.area * np.asarray(sech_profile.M)
    V = zero_perturbation()
    coarse = mass_sharp(geom, sech_profile, decoupled, V, ModelParams(epsilon=0.1), 16.0) - leading
    fine = mass_sharp(geom, sech_profile, decoupled, V, ModelParams(epsilon=0.05), 16.0) - leading
    assert np.allclose(coarse, 2.0 * fine, rtol=1e-10, atol=1e-12)


# -------------------------------------------------
# SPECTRAL GRID
# -------------------------------------------------
def test_spectral_laplacian():
    grid = SpectralGrid((64, 32), (2.0 * np.pi, 2.0 * np.pi))
    x = np.arange(64) * 2.0 * np.pi / 64
    y = np.arange(32) * 2.0 * np.pi / 32
    X, Y = np.meshgrid(x, y, indexing="ij")
    u = np.sin(X) * np.cos(2.0 * Y)
    assert np.allclose(grid.laplacian(u), -5.0 * u, atol=1e-10)


def test_spectral_grid_needs_two_axes():
    with pytest.raises(ShapeError):
        SpectralGrid((8, 8, 8), (1.0, 1.0, 1.0))


# -------------------------------------------------
# SERVICE
# -------------------------------------------------
def test_service_builds_configured_curve(make_config):
    config = make_config(
        interface={"curve": {"kind": "ellipse", "a": 1.0, "b": 0.5, "center": [0.0, 0.0]}, "l0": 0.05}
    )
    service = InterfaceService()
    geom = service.build_curve(config.interface.curve)
    assert geom.area == pytest.approx(4.84422, abs=1e-5)
    assert service.admissibility(config, geom).passed


def test_grid_shape_follows_cells_per_epsilon(make_config):
    config = make_config(interface={"lengths": [4.0, 4.0], "cells_per_epsilon": 8})
    assert InterfaceService().grid_shape(config, 0.25) == (128, 128)


def test_cutoff_tail_of_sech_profile(sech_profile):
    # 1.5 sech^2(z / 2) at z = l0 / eps = 8
    tail = InterfaceService().require_untruncated(sech_profile, 0.8, 0.1)
    assert tail == pytest.approx(1.5 / np.cosh(4.0) ** 2, rel=2e-2)


def test_energy_check_rejects_truncating_l0(make_config, decoupled, sech_profile):
    config = make_config(interface={"l0": 0.3, "epsilons": [0.1, 0.05]})
    with pytest.raises(ParameterError, match="cuts the profile"):
        InterfaceService().energy_check(config, decoupled, sech_profile)


@pytest.mark.slow
def test_canham_helfrich_ladder(decoupled):
    config = RunConfig.model_validate(CANHAM_HELFRICH)
    profile0 = HomoclinicService().solve(config, decoupled)
    table, checks = InterfaceService().energy_check(config, decoupled, profile0)

    assert list(table["epsilon"]) == [0.1, 0.05, 0.025]
    assert np.all(np.diff(table["energy_gap_scaled"]) < 0)
    assert checks["energy_ratios_in_window"], checks["energy_ratios"]
    assert checks["mass_order_ok"], checks["mass_order"]


@pytest.mark.slow
def test_energy_is_grid_converged(make_config, decoupled):
    config = make_config(potential={"kind": "decoupled"}, profile={"half_length": 40.0, "n_nodes": 8001})
    profile = HomoclinicService().solve(config, decoupled)
    geom = circle(4.0, center=(8.0, 8.0))
    params = ModelParams(epsilon=0.1)

    # 8 and 12 cells per epsilon; l0 / eps = 12 leaves a negligible tail at the cutoff
    energies = [
        energy_full(dress(geom, profile, params, (16.0, 16.0), (n, n), 1.2), decoupled, zero_perturbation())
        for n in (1280, 1920)
    ]
    assert abs(energies[1] - energies[0]) <= 1e-6 * abs(energies[1])
