import logging

from app.api.commands.common import add_command, execute, prepare_profile
from app.services.flow2d.flow_service import FlowService
from app.services.potentials.billiard_potential import RegularizedBilliard
from app.services.spectra.spectra_service import SpectraService
from app.utils.exceptions import NumericalError

logger = logging.getLogger(__name__)

service = FlowService()
spectra = SpectraService()


def _add_steps(parser):
    parser.add_argument("--max-steps", type=int, default=None, help="stop after this many accepted steps")


def write_run(store, run, prefix: str = ""):
    store.write_csv(f"{prefix}diagnostics.csv", run.diagnostics.as_table())
    store.write_field(f"{prefix}final", run.final)
    for i, snap in enumerate(run.snapshots):
        store.write_field(f"{prefix}snap_{i:04d}", snap, subdir="snapshots")


# -------------------------------------------------
# FLOW
# -------------------------------------------------
def flow(args) -> int:
    def body(config, store):
        pot, _, profile = prepare_profile(config)
        run = service.flow(config, pot, profile, max_steps=args.max_steps)
        write_run(store, run)
        store.write_json("flow.json", run.to_dict())
        return service.checks(run, config.flow.energy_tol)

    return execute(args, "flow", body)


# -------------------------------------------------
# PEARLING
# -------------------------------------------------
def predicted_modes(config, pot, profile) -> list:
    if not isinstance(pot, RegularizedBilliard):
        return []
    try:
        report = spectra.analyse(config, profile, pot)
    except NumericalError as exc:
        logger.warning("no pearling prediction: %s", exc.message)
        return []
    return sorted({k for p in spectra.predict_pearling(config, report) for k in p.modes})


def pearling(args) -> int:
    def body(config, store):
        pot, profile0, profile = prepare_profile(config)
        modes = predicted_modes(config, pot, profile0)
        runs = service.pearling(config, pot, profile, predicted_modes=modes, max_steps=args.max_steps, profile0=profile0)
        checks = {}
        for offset, result in runs.items():
            write_run(store, result.run, prefix=f"{offset}_")
            checks[offset] = service.checks(result.run, config.flow.energy_tol)
        store.write_json("pearling.json", {offset: r.to_dict() for offset, r in runs.items()})
        checks["layers"] = service.layer_mapping(runs)
        return checks

    return execute(args, "pearling", body)


def register(subparsers):
    _add_steps(add_command(subparsers, "flow", flow, "run the mass-conserving gradient flow"))
    _add_steps(add_command(subparsers, "pearling", pearling, "above/tuned/below pearling runs of a circular bilayer"))
