import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.models.geoflow import RadialSystem, Tau1State
from app.schemas.model_schema import ModelParams
from app.services.geoflow import (
    b2_dot_m,
    critical_curvature,
    curvature_square_integral,
    curve_willmore,
    project_gamma,
    radial_velocity,
    radial_willmore,
    stability_K,
    tau1_flow,
)
from app.services.geoflow.geoflow_service import GeoflowService
from app.services.interface import circle, dumbbell, ellipse, sphere_family
from app.utils.exceptions import ParameterError

# moments of the decoupled sech^2 profile
M1, M2 = 1.2, 6.0
PARAMS = ModelParams(epsilon=0.1)


def system(radii, d=3, a0=1.0) -> RadialSystem:
    return RadialSystem(radii=np.asarray(radii, dtype=float), d=d, a0=a0, M1=M1, M2=M2)


# -------------------------------------------------
# RADIAL VELOCITY
# -------------------------------------------------
def test_equal_radii_are_stationary():
    R = np.full(3, 0.7)
    assert np.allclose(radial_velocity(R, 3, 1.0, M1, M2), 0.0, atol=1e-14)
    assert np.allclose(radial_velocity(R, 2, -0.5, M1, M2), 0.0, atol=1e-14)


@pytest.mark.parametrize("d, a0", [(2, 0.5), (3, 1.0), (3, -1.0)])
def test_velocity_preserves_interfacial_area(d, a0):
    R = np.array([1.0, 0.8, 1.3])
    V = radial_velocity(R, d, a0, M1, M2)
    # d/dtau sum R^(d-1) = (d-1) sum R^(d-2) V
    assert np.sum(R ** (d - 2) * V) == pytest.approx(0.0, abs=1e-13)


def test_critical_curvature_of_equal_radii():
    # d = 3: a0 (2/R - a0)
    assert critical_curvature(np.array([0.5, 0.5]), 3, 1.0) == pytest.approx(3.0)


def test_background_slaving_on_unit_circle():
    # H0 = 1, H1 = -1: integrand 1 - 1/2 + 1 = 3/2
    assert b2_dot_m(np.array([1.0]), 2, 0.0, M1) == pytest.approx(-1.8)


# -------------------------------------------------
# RADIAL FLOW
# -------------------------------------------------
def test_positive_a0_equalizes_spheres():
    trajectory = radial_willmore(system([1.0, 0.8]), 50.0)

    assert np.allclose(trajectory.radii[-1], np.sqrt(0.82), atol=1e-6)
    assert trajectory.events == []
    assert trajectory.survivors == [0, 1]
    assert trajectory.conserved_drift < 1e-8
    assert trajectory.radii.shape == (501, 2)


def test_negative_a0_extinguishes_smaller_sphere():
    trajectory = radial_willmore(system([1.0, 0.8], a0=-1.0), 50.0)

    assert len(trajectory.events) == 1
    assert trajectory.events[0]["sphere"] == 1
    assert trajectory.survivors == [0]
    assert trajectory.radii[-1, 0] == pytest.approx(np.sqrt(1.64), abs=1e-6)
    assert trajectory.radii[-1, 1] == 0.0


def test_zero_a0_is_neutral_in_three_dimensions():
    trajectory = radial_willmore(system([1.0, 0.8], a0=0.0), 10.0, samples=11)
    assert np.allclose(trajectory.radii, [1.0, 0.8], atol=1e-12)


def test_circles_equalize():
    trajectory = radial_willmore(system([1.0, 0.8], d=2, a0=0.3), 50.0)
    assert np.allclose(trajectory.radii[-1], 0.9, atol=1e-6)


@pytest.mark.parametrize("sys", [system([1.0], d=4), system([1.0, -0.5])])
def test_radial_flow_rejects(sys):
    with pytest.raises(ParameterError):
        radial_willmore(sys, 1.0)


# -------------------------------------------------
# STABILITY
# -------------------------------------------------
@pytest.mark.parametrize(
    "R_bar, a0, d, K, verdict",
    [
        (1.0, 1.0, 3, 1.0, "stable"),
        (2.0, 0.0, 2, 0.5, "stable"),
        (1.0, -1.0, 3, -1.0, "unstable"),
        (1.0, 0.0, 3, 0.0, "neutral"),
    ],
)
def test_stability_K(R_bar, a0, d, K, verdict):
    assert stability_K(R_bar, a0, d) == (pytest.approx(K), verdict)


def test_stability_K_needs_positive_radius():
    with pytest.raises(ParameterError):
        stability_K(0.0, 1.0, 3)


@pytest.mark.parametrize("a0, verdict", [(1.0, "stable"), (-1.0, "unstable"), (0.0, "neutral")])
def test_jacobian_agrees_with_K(a0, verdict):
    report = GeoflowService().stability(system([1.0, 0.8], a0=a0))
    assert report["verdict"] == verdict
    assert report["jacobian_verdict"] == verdict
    assert report["verdicts_agree"]


def test_single_sphere_has_no_jacobian():
    report = GeoflowService().stability(system([1.0]))
    assert "jacobian_verdict" not in report


# -------------------------------------------------
# TAU1 QUENCH
# -------------------------------------------------
def quench(B1) -> Tau1State:
    return Tau1State(
        B1=np.asarray(B1, dtype=float),
        radii=np.array([1.0]),
        d=2,
        domain_area=4.0 * np.pi ** 2,
        M=np.array([6.0, 0.0]),
        M2=M2,
        A=np.diag([1.0, 2.0]),
    )


def test_curvature_square_integral():
    assert curvature_square_integral([2.0], 2) == pytest.approx(np.pi)
    assert curvature_square_integral([1.0, 1.0], 3) == pytest.approx(32.0 * np.pi)


def test_quench_drives_E_to_zero():
    trajectory = tau1_flow(quench([0.1, 0.0]), 50.0)

    assert trajectory.E[0] == pytest.approx(0.6)
    assert abs(trajectory.E[-1]) < 1e-8
    assert np.max(np.abs(trajectory.B1_final)) < 1e-8
    assert trajectory.monotone
    assert not trajectory.extinct
    assert trajectory.mass_residual <= 1e-8
    # positive E grows the circle
    assert trajectory.radii[-1, 0] > 1.0


def test_quench_keeps_component_orthogonal_to_M():
    trajectory = tau1_flow(quench([0.1, 0.1]), 50.0)
    assert np.allclose(trajectory.B1_final, [0.0, 0.1], atol=1e-8)


def test_negative_E_shrinks_circle():
    trajectory = tau1_flow(quench([-0.1, 0.0]), 50.0)
    assert trajectory.monotone
    assert trajectory.radii[-1, 0] < 1.0
    assert trajectory.mass_residual <= 1e-8


def test_quench_rejects_bad_radii():
    init = quench([0.1, 0.0])
    bad = Tau1State(init.B1, np.array([-1.0]), init.d, init.domain_area, init.M, init.M2, init.A)
    with pytest.raises(ParameterError):
        tau1_flow(bad, 1.0)


# -------------------------------------------------
# CURVE FLOW
# -------------------------------------------------
@given(st.integers(0, 2 ** 32 - 1))
def test_projection_is_idempotent_and_orthogonal(seed):
    geom = ellipse(1.0, 0.5, n=128)
    f = np.random.default_rng(seed).standard_normal(geom.n_nodes)

    once = project_gamma(f, geom.H0, geom.ds)
    assert abs(np.sum(once * geom.H0 * geom.ds)) < 1e-10 * np.sqrt(np.sum(f ** 2 * geom.ds))
    assert np.allclose(project_gamma(once, geom.H0, geom.ds), once, atol=1e-12)


def test_circle_is_stationary():
    trajectory = curve_willmore(circle(1.0, n=256), 0.0, M1, M2, PARAMS, 2e-3, dt=1e-4, snapshot_every=10)

    radii = np.hypot(*trajectory.final.points)
    assert np.allclose(radii, 1.0, atol=1e-6)
    assert trajectory.breakdown is None
    assert len(trajectory.snapshots) == 3


def test_ellipse_keeps_its_length():
    trajectory = curve_willmore(ellipse(1.0, 0.5, n=256), 0.0, M1, M2, PARAMS, 2e-4, dt=1e-5, snapshot_every=10)
    lengths = np.asarray(trajectory.lengths)

    assert len(lengths) == 21
    # uncorrected lengths: the drift is second order in dt
    assert np.max(np.abs(lengths - lengths[0])) / lengths[0] < 1e-4
    assert trajectory.projection_defect < 1e-10
    assert not np.allclose(trajectory.final.points, ellipse(1.0, 0.5, n=256).points)


def test_thin_neck_stops_the_flow():
    geom = dumbbell(2.0, 1.0, 0.15)
    trajectory = curve_willmore(geom, 0.0, M1, M2, PARAMS, 1e-5, dt=1e-6, l0=0.1, snapshot_every=1)

    assert trajectory.breakdown is not None
    assert "whiskers intersect" in trajectory.breakdown
    assert len(trajectory.times) == 2
    assert len(trajectory.snapshots) == 2


@pytest.mark.parametrize("geom", [circle(1.0, n=64), sphere_family([1.0], d=3)])
def test_curve_flow_rejects(geom):
    with pytest.raises(ParameterError):
        curve_willmore(geom, 0.0, M1, M2, PARAMS, 1e-3)


# -------------------------------------------------
# SERVICE
# -------------------------------------------------
def test_configured_moments(make_config, sech_profile):
    service = GeoflowService()
    M, m1, m2 = service.moments(make_config(geoflow={"M1": 1.0, "M2": 2.0, "M": [3.0, 0.0]}))
    assert np.allclose(M, [3.0, 0.0])
    assert (m1, m2) == (1.0, 2.0)

    M, m1, m2 = service.moments(make_config(), sech_profile)
    assert m1 == pytest.approx(1.2, abs=1e-5)

    with pytest.raises(ParameterError):
        service.moments(make_config())


def test_radii_figure_runs_both_signs(make_config):
    config = make_config(geoflow={"radial": {"t_end": 1.0, "samples": 11}})
    figure = GeoflowService().radii_figure(config, M1, M2)

    assert set(figure) == {"positive", "negative"}
    assert figure["positive"][1]["verdict"] == "stable"
    assert figure["negative"][1]["verdict"] == "unstable"


def test_service_quench(make_config, decoupled):
    config = make_config(geoflow={"tau1": {"t_end": 50.0}})
    trajectory = GeoflowService().tau1(config, decoupled, np.array([6.0, 0.0]), M2)
    assert np.max(np.abs(trajectory.B1_final)) < 1e-8

    with pytest.raises(ParameterError):
        GeoflowService().tau1(config, decoupled, np.array([6.0]), M2)
