import logging
from typing import Optional

import numpy as np

from app.models.flow import LayerGrowth, PearlingRun
from app.models.profile import HomoclinicProfile
from app.schemas.run_schema import RunConfig
from app.services.flow2d.layers import layer_amplitudes, striation_radii
from app.services.flow2d.scheme import run_flow
from app.services.interface.curves import circle, perturbed_circle
from app.services.interface.dressing import dress
from app.services.interface.energy import mass_full, mass_sharp, perturbation_for
from app.services.potentials.base import Potential
from app.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

OFFSET_SIGN = {"above": 1.0, "tuned": 0.0, "below": -1.0}


def seeded_interface(config: RunConfig):
    """Circle of the configured radius with small random low-mode wiggles."""
    curve = config.interface.curve
    amp = config.pearling.seed_amplitude
    if amp == 0:
        return circle(curve.radius, curve.center, curve.n_nodes)
    rng = np.random.default_rng(config.seed)
    amplitudes = {
        int(k): (amp * rng.uniform(-1.0, 1.0), rng.uniform(0.0, 2.0 * np.pi))
        for k in config.pearling.seed_modes
    }
    return perturbed_circle(curve.radius, curve.center, amplitudes, curve.n_nodes)


def layer_growth(name: str, radius: float, series) -> LayerGrowth:
    amps = np.asarray(series)
    final = amps[-1]
    k = int(np.argmax(final[2:])) + 2
    initial = float(amps[0, k])
    return LayerGrowth(
        layer=name,
        radius=radius,
        dominant_mode=k,
        growth=float(final[k] / max(initial, np.finfo(float).tiny)),
        initial_amplitude=initial,
        final_amplitude=float(final[k]),
    )


def pearling_experiment(
    offset: str,
    config: RunConfig,
    profile: HomoclinicProfile,
    pot: Potential,
    max_steps: Optional[int] = None,
    predicted_modes=(),
    profile0: Optional[HomoclinicProfile] = None,
) -> PearlingRun:
    """
    Dress a circular bilayer, set the mass of every species to the sharp-interface
    mass of the seeded curve scaled by 1 +- offset_scale * eps for "above"/"below"
    (unscaled for "tuned"), and run the flow while recording angular amplitudes
    on each striation ring.

    `profile0` is the unperturbed profile the sharp mass is built from; it
    defaults to `profile`.
    """
    if offset not in OFFSET_SIGN:
        raise ParameterError(f"offset must be one of {sorted(OFFSET_SIGN)}, got {offset!r}")
    params = config.params
    iface = config.interface
    eps = params.epsilon

    geom = seeded_interface(config)
    state = dress(geom, profile, params, tuple(iface.lengths), tuple(iface.shape), iface.l0)

    V = perturbation_for(params, state.N)
    sharp = mass_sharp(geom, profile0 or profile, pot, V, params, state.domain_area)
    target = sharp * (1.0 + OFFSET_SIGN[offset] * config.pearling.offset_scale * eps)
    shift = target - mass_full(state)
    # mass_full scales the cell sum by 1/eps
    state = state.with_field(state.u + (eps * shift / state.domain_area)[:, None, None])

    center = iface.curve.center
    radii = striation_radii(iface.curve.radius, eps, profile.collision_times)

    def observe(current, diag):
        for name, amps in layer_amplitudes(current, center, radii).items():
            diag.layer_modes.setdefault(name, []).append(amps)

    run = run_flow(state, config.flow, pot, V, observer=observe, max_steps=max_steps)

    layers = [layer_growth(name, radii[name], run.diagnostics.layer_modes[name]) for name in radii]
    top = max(layers, key=lambda g: g.growth)
    pearled = top.layer if top.growth >= config.pearling.growth_flag else None
    quiet = all(g.growth < config.pearling.quiet_flag for g in layers)

    logger.info(
        "pearling %s: %s",
        offset,
        ", ".join(f"{g.layer} mode {g.dominant_mode} x{g.growth:.3g}" for g in layers),
    )
    return PearlingRun(
        offset=offset,
        mass_shift=shift,
        target_mass=target,
        run=run,
        layers=layers,
        pearled_layer=pearled,
        quiet=quiet,
        predicted_modes=list(predicted_modes),
    )
