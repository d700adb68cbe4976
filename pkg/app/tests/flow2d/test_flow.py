import numpy as np
import pytest

from app.models.interface import FieldState
from app.schemas.flow_schema import SolverConfig
from app.schemas.model_schema import ModelParams
from app.services.flow2d import (
    angular_amplitudes,
    pearling_experiment,
    run_flow,
    seeded_interface,
    step,
    striation_radii,
    variational_derivative,
)
from app.services.flow2d.flow_service import FlowService
from app.services.interface import energy_full, mass_full, mass_sharp, perturbation_for
from app.services.potentials import zero_perturbation
from app.utils.exceptions import ParameterError

PARAMS = ModelParams(epsilon=0.2)
SHAPE = (32, 32)
LENGTHS = (2.0 * np.pi, 2.0 * np.pi)


def smooth_state(params: ModelParams = PARAMS) -> FieldState:
    x = np.arange(SHAPE[0]) * LENGTHS[0] / SHAPE[0]
    y = np.arange(SHAPE[1]) * LENGTHS[1] / SHAPE[1]
    X, Y = np.meshgrid(x, y, indexing="ij")
    u = np.stack([0.4 + 0.3 * np.cos(X) * np.cos(Y), 0.1 * np.sin(X + 2.0 * Y)])
    return FieldState(u=u, lengths=LENGTHS, params=params)


# -------------------------------------------------
# CHEMICAL POTENTIAL
# -------------------------------------------------
def test_mu_vanishes_at_origin(decoupled):
    state = FieldState(u=np.zeros((2,) + SHAPE), lengths=LENGTHS, params=PARAMS)
    assert np.all(variational_derivative(state, decoupled) == 0.0)


def test_mu_of_constant_field(decoupled):
    a = 0.3
    u = np.zeros((2,) + SHAPE)
    u[0] = a
    state = FieldState(u=u, lengths=LENGTHS, params=PARAMS)
    grad = a - a * a
    expected = (1.0 - 2.0 * a) * grad - PARAMS.epsilon ** 2 * grad

    mu = variational_derivative(state, decoupled, zero_perturbation())
    assert np.allclose(mu[0], expected, atol=1e-12)
    assert np.allclose(mu[1], 0.0, atol=1e-12)


@pytest.mark.parametrize("perturbation", ["zero", "rotational"])
def test_mu_is_energy_gradient(decoupled, perturbation):
    params = ModelParams(epsilon=0.2, eta1=1.5, eta2=0.5, perturbation=perturbation)
    state = smooth_state(params)
    X, Y = state.coordinates()
    v = np.stack([np.cos(2.0 * Y), np.sin(X - Y)])
    h = 1e-5

    mu = variational_derivative(state, decoupled)
    predicted = float(np.sum(mu * v) * state.cell_volume)
    plus = energy_full(state.with_field(state.u + h * v), decoupled)
    minus = energy_full(state.with_field(state.u - h * v), decoupled)
    assert (plus - minus) / (2.0 * h) == pytest.approx(predicted, rel=1e-6, abs=1e-9)


# -------------------------------------------------
# TIME STEPPING
# -------------------------------------------------
def test_step_conserves_mass(decoupled):
    state = smooth_state()
    after = step(state, SolverConfig(dt=1e-3), decoupled)

    assert after.time == pytest.approx(1e-3)
    assert np.allclose(mass_full(after), mass_full(state), rtol=0.0, atol=1e-10)
    assert not np.allclose(after.u, state.u)


def test_flow_decreases_energy(decoupled):
    config = SolverConfig(dt=1e-3, t_end=0.02, snapshot_every=5)
    run = run_flow(smooth_state(), config, decoupled)
    diag = run.diagnostics

    assert run.steps >= 20
    assert run.final.time == pytest.approx(0.02)
    assert diag.n_records == run.steps + 1
    assert diag.energy_monotone(config.energy_tol)
    assert diag.mass_drift() < 1e-10
    assert diag.sigma > 0
    assert len(run.snapshots) == 1 + run.steps // 5


def test_semi_implicit_scheme_has_no_stabilizer(decoupled):
    config = SolverConfig(dt=1e-4, t_end=1e-3, scheme="semi-implicit")
    run = run_flow(smooth_state(), config, decoupled, max_steps=3)

    assert run.diagnostics.sigma == 0.0
    assert run.steps == 3
    table = run.diagnostics.as_table()
    assert set(table) >= {"t", "energy", "mass1", "mass2", "maxu"}


def test_service_checks(decoupled):
    run = run_flow(smooth_state(), SolverConfig(dt=1e-3, t_end=5e-3), decoupled)
    checks = FlowService().checks(run, 1e-10)
    assert checks["mass_conserved"]
    assert checks["energy_monotone"]
    assert checks["excursions"] == 0


# -------------------------------------------------
# LAYERS
# -------------------------------------------------
def test_striation_radii():
    assert striation_radii(1.0, 0.1, []) == {"core": 1.0}
    radii = striation_radii(1.0, 0.1, [0.5, -0.5])
    assert radii == pytest.approx({"inner": 0.95, "outer": 1.05})


def test_angular_amplitudes_pick_the_mode():
    theta = 2.0 * np.pi * np.arange(256) / 256
    samples = np.stack([1.0 + 0.2 * np.cos(5.0 * theta), np.zeros_like(theta)])
    amps = angular_amplitudes(samples, n_modes=16)

    assert amps.shape == (17,)
    assert amps[0] == 0.0
    assert int(np.argmax(amps)) == 5
    assert amps[5] == pytest.approx(0.1)


# -------------------------------------------------
# PEARLING
# -------------------------------------------------
def test_unseeded_interface_is_circle(make_config):
    config = make_config(pearling={"seed_amplitude": 0.0})
    assert seeded_interface(config).is_circle


def test_pearling_rejects_unknown_offset(make_config, sech_profile, decoupled):
    with pytest.raises(ParameterError):
        pearling_experiment("sideways", make_config(), sech_profile, decoupled)


def test_pearling_experiment_shifts_mass(make_config, sech_profile, decoupled):
    config = make_config(
        params={"epsilon": 0.2},
        flow={"dt": 1e-4, "t_end": 1.0},
        pearling={"offsets": ["above"]},
    )
    result = pearling_experiment("above", config, sech_profile, decoupled, max_steps=2)

    assert result.run.steps == 2
    assert np.allclose(result.run.diagnostics.masses[0], result.target_mass, rtol=1e-10, atol=1e-10)
    assert [g.layer for g in result.layers] == ["core"]
    assert set(result.run.diagnostics.layer_modes) == {"core"}
    assert result.run.diagnostics.mass_drift() < 1e-10


def test_pearling_masses_follow_sharp_interface_mass(make_config, sech_profile, decoupled):
    config = make_config(
        params={"epsilon": 0.2},
        flow={"dt": 1e-4, "t_end": 1.0},
        pearling={"seed_amplitude": 0.0},
    )
    area = float(np.prod(config.interface.lengths))
    sharp = mass_sharp(seeded_interface(config), sech_profile, decoupled, perturbation_for(config.params), config.params, area)

    runs = {
        offset: pearling_experiment(offset, config, sech_profile, decoupled, max_steps=1)
        for offset in ("above", "tuned", "below")
    }

    assert np.allclose(runs["tuned"].target_mass, sharp, rtol=1e-12)
    assert np.allclose(runs["tuned"].run.diagnostics.masses[0], sharp, rtol=1e-10, atol=1e-10)
    # offset_scale 0.5 at epsilon 0.2
    assert np.allclose(runs["above"].target_mass, 1.1 * sharp, rtol=1e-12)
    assert np.allclose(runs["below"].target_mass, 0.9 * sharp, rtol=1e-12)
    assert runs["above"].mass_shift[0] > runs["tuned"].mass_shift[0] > runs["below"].mass_shift[0]
