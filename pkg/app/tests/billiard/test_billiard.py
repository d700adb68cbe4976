import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from app.services.billiard import (
    collision_sign_changes,
    enclosed_area,
    raytrace_collision_curve,
    reflect,
    sample_trajectory,
    trace_homoclinic,
    verify_transversality_proxy,
)
from app.utils.exceptions import DegenerateCollisionError, ParameterError

C1 = [0.55, 0.2]
C2 = [0.2, 0.55]
TRIANGLE_ANGLE = float(np.arctan2(0.2, 0.55))


@pytest.fixture(scope="module")
def triangle():
    return raytrace_collision_curve(C1, C2)


# -------------------------------------------------
# REFLECTION
# -------------------------------------------------
def test_reflect_head_on():
    assert np.allclose(reflect([1.0, 0.0], [-1.0, 0.0]), [-1.0, 0.0])


def test_reflect_rejects_non_unit_normal():
    with pytest.raises(ParameterError):
        reflect([1.0, 0.0], [2.0, 0.0])


def test_reflect_rejects_tangential_collision():
    with pytest.raises(DegenerateCollisionError):
        reflect([1.0, 0.0], [0.0, 1.0])


@given(
    st.floats(0.0, 2.0 * np.pi),
    st.floats(0.0, 2.0 * np.pi),
    st.floats(0.1, 10.0),
)
def test_reflect_preserves_speed_and_is_involutive(phi, theta, speed):
    n = np.array([np.cos(phi), np.sin(phi)])
    v = speed * np.array([np.cos(theta), np.sin(theta)])
    assume(abs(n @ v) > 1e-6 * speed)

    v_plus = reflect(v, n)
    assert np.linalg.norm(v_plus) == pytest.approx(speed, rel=1e-12)
    assert n @ v_plus == pytest.approx(-(n @ v), abs=1e-12)
    assert np.allclose(reflect(v_plus, n), v, atol=1e-12)


# -------------------------------------------------
# UNIVERSAL BILLIARD
# -------------------------------------------------
def test_diagonal_orbit_is_head_on(universal):
    orbit = trace_homoclinic(universal, np.pi / 4)

    assert orbit.is_homoclinic
    assert orbit.n_collisions == 1
    assert orbit.speed_plateau == pytest.approx(np.sqrt(0.5))
    assert orbit.return_miss < 1e-8

    hit = orbit.collisions[0]
    assert np.linalg.norm(hit.point) == pytest.approx(0.875, abs=1e-10)
    assert hit.time == 0.0
    assert hit.normal_speed == pytest.approx(np.sqrt(0.5))
    assert enclosed_area(orbit) == pytest.approx(0.0, abs=1e-14)


def test_sampled_orbit(universal):
    orbit = trace_homoclinic(universal, np.pi / 4)
    u, v, _ = sample_trajectory(orbit, universal, np.array([-200.0, 0.0, 200.0]))

    assert np.allclose(u[:, 1], orbit.collisions[0].point)
    assert np.linalg.norm(u[:, 0]) < 1e-6
    assert np.linalg.norm(u[:, 2]) < 1e-6
    assert np.linalg.norm(v[:, 1]) == pytest.approx(np.sqrt(0.5))


def test_diagonal_orbit_turns_once_on_the_curve(universal):
    orbit = trace_homoclinic(universal, np.pi / 4)

    assert collision_sign_changes(orbit, universal) == orbit.n_collisions == 1


def test_exit_outside_simplex(universal):
    with pytest.raises(ParameterError):
        trace_homoclinic(universal, -0.5)


def test_max_collisions_must_be_positive(universal):
    with pytest.raises(ParameterError):
        trace_homoclinic(universal, np.pi / 4, max_collisions=0)


# -------------------------------------------------
# RAY-TRACED BILLIARD
# -------------------------------------------------
def test_triangle_is_reproduced(triangle):
    orbit = trace_homoclinic(triangle, TRIANGLE_ANGLE)

    assert orbit.is_homoclinic
    assert orbit.n_collisions == 2
    assert np.allclose(orbit.collision_points, [C1, C2], atol=1e-8)
    assert enclosed_area(orbit) == pytest.approx(0.13125, rel=1e-6)
    assert all(c.normal_speed > 0 for c in orbit.collisions)


def test_triangle_turns_twice_on_the_curve(triangle):
    orbit = trace_homoclinic(triangle, TRIANGLE_ANGLE)

    assert collision_sign_changes(orbit, triangle) == orbit.n_collisions == 2


def test_collision_budget_exhausted(triangle):
    orbit = trace_homoclinic(triangle, TRIANGLE_ANGLE, max_collisions=1)

    assert not orbit.is_homoclinic
    assert orbit.reason == "exceeded max collisions"
    with pytest.raises(ParameterError):
        sample_trajectory(orbit, triangle, np.zeros(1))
    assert verify_transversality_proxy(orbit, triangle).verdict == "non-homoclinic"


@pytest.mark.parametrize(
    "c1, c2",
    [
        ([0.1, 0.1], C2),  # inside the quadrant disc
        (C1, C1),
        ([0.9, 0.5], C2),  # outside the simplex
    ],
)
def test_raytrace_rejects_bad_points(c1, c2):
    with pytest.raises(ParameterError):
        raytrace_collision_curve(c1, c2)
