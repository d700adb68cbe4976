import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from app.schemas.run_schema import RunConfig
from app.services.potentials import (
    BilliardPotential,
    Mollifier,
    MollifierKind,
    RegionLabel,
    RegularizedBilliard,
    classify_region,
    finite_difference_gradient_check,
    quadratic_potential,
    rotational_perturbation,
    smooth_jump,
    universal_billiard,
    zero_perturbation,
)
from app.services.potentials.checks import finite_difference_hessian_check, hessian_asymmetry
from app.services.potentials.potentials_service import PotentialService
from app.services.potentials.smooth import SmoothPotential
from app.utils.exceptions import CapabilityError, DomainError, ParameterError

SQRT_HALF = np.sqrt(0.5)


# -------------------------------------------------
# SMOOTH POTENTIALS
# -------------------------------------------------
def test_decoupled_origin(decoupled):
    value, grad, hess = decoupled.evaluate(np.zeros(2))
    assert value == 0.0
    assert np.all(grad == 0.0)
    assert np.allclose(hess, np.diag([1.0, 2.0]))


@given(st.floats(-0.8, 1.6), st.floats(-0.8, 0.8))
def test_decoupled_derivatives_match_differences(decoupled, u1, u2):
    u = np.array([u1, u2])
    assert finite_difference_gradient_check(decoupled, u) < 1e-6
    assert finite_difference_hessian_check(decoupled, u) < 1e-6


def test_quadratic_rejects_indefinite_hessian():
    with pytest.raises(ParameterError):
        quadratic_potential([[1.0, 0.0], [0.0, -1.0]])


def test_quadratic_value():
    pot = quadratic_potential([[2.0, 0.5], [0.5, 1.0]])
    u = np.array([1.0, -2.0])
    assert pot.value(u) == pytest.approx(0.5 * (2.0 - 2.0 + 4.0))
    assert np.allclose(pot.hessian(u), [[2.0, 0.5], [0.5, 1.0]])


def test_smooth_potential_checks_origin():
    with pytest.raises(ParameterError):
        SmoothPotential(
            1,
            value=lambda U: U[0] + 1.0,
            gradient=lambda U: np.ones_like(U),
            hessian=lambda U: np.zeros((1, 1) + U.shape[1:]),
        )


# -------------------------------------------------
# BILLIARD POTENTIALS
# -------------------------------------------------
def test_universal_rejects_shape_parameter():
    with pytest.raises(ParameterError):
        universal_billiard(0.9)
    with pytest.raises(ParameterError):
        universal_billiard(0.0)


def test_regions(universal):
    assert classify_region(universal, [0.1, 0.1]) == RegionLabel.QUADRANT
    assert classify_region(universal, [0.55, 0.2]) == RegionLabel.PLATEAU
    assert classify_region(universal, [0.55, 0.2], delta=0.1) == RegionLabel.BAND
    assert classify_region(universal, [0.7, 0.7]) == RegionLabel.WELL


def test_unregularized_values(universal):
    pot = BilliardPotential(universal)
    assert pot.value([0.1, 0.1]) == pytest.approx(0.02)
    assert pot.value([0.55, 0.2]) == pytest.approx(0.25)
    assert pot.value([0.7, 0.7]) == pytest.approx(-0.25)


def test_point_outside_simplex(universal):
    with pytest.raises(DomainError):
        BilliardPotential(universal).value([-0.5, 0.1])


def test_derivative_order_capability(universal):
    with pytest.raises(CapabilityError):
        BilliardPotential(universal).evaluate([0.1, 0.1], order=3)


def test_gradient_check_refuses_jump(universal):
    on_curve = 0.875 * np.array([SQRT_HALF, SQRT_HALF])
    with pytest.raises(ParameterError):
        finite_difference_gradient_check(BilliardPotential(universal), on_curve)


def test_regularized_matches_billiard_off_band(universal):
    smooth = RegularizedBilliard(universal, 0.01)
    exact = BilliardPotential(universal)
    for u in ([0.1, 0.05], [0.55, 0.2], [0.8, 0.8]):
        assert smooth.value(u) == pytest.approx(exact.value(u), abs=1e-12)


def test_band_gradient_norms_of_universal_billiard(universal, caplog):
    with caplog.at_level(logging.WARNING, logger="app.services.potentials.billiard_potential"):
        pot = RegularizedBilliard(universal, 0.1)

    lo, hi = pot.gradient_norms
    # off the diagonal |grad rho| = |u/|u| + sign(y) e| lies in [sqrt 2, 2]
    assert np.sqrt(2.0) - 1e-9 <= lo <= hi <= 2.0 + 1e-9
    assert "not a signed distance" in caplog.text


@pytest.mark.parametrize("kind", list(MollifierKind))
def test_regularized_derivatives_in_band(universal, kind):
    pot = RegularizedBilliard(universal, 0.05, Mollifier(kind))
    u = 0.87 * np.array([SQRT_HALF, SQRT_HALF]) + np.array([0.01, -0.01])
    assert finite_difference_gradient_check(pot, u) < 1e-5
    assert hessian_asymmetry(pot, u) < 1e-12


# -------------------------------------------------
# MOLLIFIER
# -------------------------------------------------
@pytest.mark.parametrize("kind", list(MollifierKind))
def test_mollifier_unit_mass(kind):
    moll = Mollifier(kind)
    t = np.linspace(-1.0, 1.0, 20001)
    assert trapezoid(moll.value(t), t) == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(moll.primitive(np.array([-1.0, 0.0, 1.0])), [0.0, 0.5, 1.0], atol=1e-10)


@given(st.floats(-3.0, 3.0))
def test_smooth_jump_saturates(rho):
    value, d1, _ = smooth_jump(0.2, np.array([rho]), 0.25, 0.25, Mollifier())
    if rho >= 0.2:
        assert value[0] == pytest.approx(0.25)
        assert d1[0] == 0.0
    elif rho <= -0.2:
        assert value[0] == pytest.approx(-0.25)
        assert d1[0] == 0.0
    else:
        assert -0.25 <= value[0] <= 0.25
        assert d1[0] >= 0.0


# -------------------------------------------------
# PERTURBATIONS
# -------------------------------------------------
@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_rotational_curl(u1, u2):
    V = rotational_perturbation()
    assert V.curl([u1, u2]) == 2.0
    assert np.allclose(V.value([u1, u2]), [-u2, u1])


def test_zero_perturbation():
    V = zero_perturbation()
    assert V.is_zero
    assert np.all(V.value([0.3, 0.4]) == 0.0)


# -------------------------------------------------
# SERVICE
# -------------------------------------------------
def test_service_builds_every_kind():
    service = PotentialService()

    def config(potential):
        return RunConfig.model_validate({"params": {"epsilon": 0.1}, "potential": potential}).potential

    assert isinstance(service.build(config({"kind": "universal", "c": 0.875})), BilliardPotential)
    reg = service.build(config({"kind": "universal", "c": 0.875, "delta": 0.1, "mollifier": "standard-bump"}))
    assert isinstance(reg, RegularizedBilliard)
    assert reg.mollifier.kind == MollifierKind.STANDARD
    assert service.build(config({"kind": "decoupled"})).name == "decoupled"
    quad = service.build(config({"kind": "quadratic", "A": [[2.0, 0.0], [0.0, 2.0]]}))
    assert np.allclose(quad.hessian_at_origin, 2.0 * np.eye(2))
    assert service.build(None).name == "decoupled"
