import numpy as np

from app.api.commands.common import configs, execute, homoclinics, potentials, prepare_profile, series_columns
from app.api.commands.flow_commands import predicted_modes, write_run
from app.middleware.logging_middleware import CommandLoggingMiddleware
from app.schemas.run_schema import RunConfig
from app.services.flow2d.flow_service import FlowService
from app.services.geoflow.geoflow_service import GeoflowService
from app.services.interface.interface_service import InterfaceService
from app.services.spectra.spectra_service import SpectraService

flows = FlowService()
geoflows = GeoflowService()
interfaces = InterfaceService()
spectra = SpectraService()

# -------------------------------------------------
# BUILT-IN CONFIGURATIONS
# -------------------------------------------------
PEARLING_FIGURE = {
    "params": {"epsilon": 0.2, "eta1": 1.0, "eta2": 1.0, "perturbation": "rotational"},
    "potential": {"kind": "raytraced", "c1": [0.55, 0.2], "c2": [0.2, 0.55], "delta": 0.2},
    "profile": {"exit_angle": float(np.arctan2(0.2, 0.55)), "continue_epsilon": True, "half_length": 8.0},
    # widest reach the 2pi box allows with 3 l0 max|k| < 1 on the seeded circle
    "interface": {
        "curve": {"kind": "circle", "center": [np.pi, np.pi], "radius": 1.5, "n_nodes": 512},
        "lengths": [2.0 * np.pi, 2.0 * np.pi],
        "shape": [256, 256],
        "l0": 0.4,
    },
    "flow": {"dt": 5e-4, "t_end": 2.0, "scheme": "stabilized", "snapshot_every": 1000},
    "spectra": {"geometry": "circle", "geometry_size": 1.5},
}

RADII_FIGURE = {
    "params": {"epsilon": 0.1},
    "geoflow": {
        "M1": 1.2,
        "M2": 6.0,
        "M": [6.0, 0.0],
        "radial": {"radii": [1.0, 0.8], "d": 3, "a0": 1.0, "t_end": 50.0},
    },
}

SPECTRA_LADDER = {
    "params": {"epsilon": 0.1},
    "potential": {"kind": "universal", "c": 0.875, "delta": 0.2},
    "spectra": {"deltas": [0.2, 0.1, 0.05]},
}

CANHAM_HELFRICH = {
    "params": {"epsilon": 0.1, "m": [1.0, 0.0], "perturbation": "zero"},
    "potential": {"kind": "decoupled"},
    # window covers 3 l0 / eps at eps = 0.025
    "profile": {"half_length": 100.0, "n_nodes": 10001},
    # l0 / eps >= 8 over the ladder; R > 3 l0 keeps the whiskers valid
    "interface": {
        "curve": {"kind": "circle", "center": [5.2, 5.2], "radius": 2.6, "n_nodes": 512},
        "lengths": [10.4, 10.4],
        "l0": 0.8,
        "epsilons": [0.1, 0.05, 0.025],
        "cells_per_epsilon": 8,
    },
}


def _config(args, default: dict) -> RunConfig:
    return configs.load(args.config) if args.config else RunConfig.model_validate(default)


# -------------------------------------------------
# PEARLING FIGURE
# -------------------------------------------------
def pearling_figure(args) -> int:
    def body(config, store):
        pot, profile0, profile = prepare_profile(config)
        modes = predicted_modes(config, pot, profile0)
        runs = flows.pearling(config, pot, profile, predicted_modes=modes, max_steps=args.max_steps, profile0=profile0)
        checks = {}
        for offset, result in runs.items():
            write_run(store, result.run, prefix=f"{offset}_")
            checks[offset] = flows.checks(result.run, config.flow.energy_tol)
            checks[offset]["layers"] = [g.to_dict() for g in result.layers]
        checks["layers"] = flows.layer_mapping(runs)
        checks["predicted_modes"] = modes
        return checks

    return execute(args, "reproduce-pearling-figure", body, _config(args, PEARLING_FIGURE))


# -------------------------------------------------
# RADII FIGURE
# -------------------------------------------------
def radii_figure(args) -> int:
    def body(config, store):
        g = config.geoflow
        checks = {}
        for label, (traj, stability) in geoflows.radii_figure(config, g.M1, g.M2).items():
            table = {"tau": traj.taus}
            table.update(series_columns("R_", traj.radii))
            store.write_csv(f"radii_{label}.csv", table)
            store.write_json(f"events_{label}.json", traj.events)
            final = traj.radii[-1]
            checks[label] = {
                "final_radii": final.tolist(),
                "spread": float(np.ptp(final[final > 0])) if np.any(final > 0) else 0.0,
                "extinctions": len(traj.events),
                "conserved_drift": traj.conserved_drift,
                **stability,
            }
        return checks

    return execute(args, "reproduce-radii-figure", body, _config(args, RADII_FIGURE))


# -------------------------------------------------
# SPECTRA LADDER
# -------------------------------------------------
def spectra_ladder(args) -> int:
    def body(config, store):
        pot = potentials.build(config.potential)
        table, checks = spectra.ladder(config, pot)
        store.write_csv("spectra_ladder.csv", table)
        checks["table"] = table.to_dict(orient="records")
        return checks

    return execute(args, "reproduce-spectra-ladder", body, _config(args, SPECTRA_LADDER))


# -------------------------------------------------
# CANHAM-HELFRICH
# -------------------------------------------------
def canham_helfrich(args) -> int:
    def body(config, store):
        pot = potentials.build(config.potential)
        profile0 = homoclinics.solve(config, pot)
        table, checks = interfaces.energy_check(config, pot, profile0)
        store.write_csv("canham_helfrich.csv", table)
        return checks

    return execute(args, "reproduce-canham-helfrich", body, _config(args, CANHAM_HELFRICH))


def register(subparsers):
    parser = subparsers.add_parser("reproduce", help="rerun a published experiment with its built-in parameters")
    figures = parser.add_subparsers(dest="figure", required=True)
    for name, handler in (
        ("pearling-figure", pearling_figure),
        ("radii-figure", radii_figure),
        ("spectra-ladder", spectra_ladder),
        ("canham-helfrich", canham_helfrich),
    ):
        sub = figures.add_parser(name)
        sub.add_argument("--config", default=None, help="JSON run configuration replacing the built-in one")
        sub.add_argument("--output", default=None)
        sub.add_argument("--max-steps", type=int, default=None)
        sub.set_defaults(handler=CommandLoggingMiddleware(f"reproduce {name}", handler))
