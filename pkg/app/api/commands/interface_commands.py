from app.api.commands.common import add_command, execute, homoclinics, potentials, prepare_profile
from app.services.interface.interface_service import InterfaceService
from app.utils.exceptions import GeometricBreakdownError

service = InterfaceService()


# -------------------------------------------------
# DRESS
# -------------------------------------------------
def dress(args) -> int:
    def body(config, store):
        geom = service.build_curve(config.interface.curve)
        report = service.admissibility(config, geom)
        store.write_json("admissibility.json", report.to_dict())
        if not report.passed:
            raise GeometricBreakdownError(
                f"{geom.name} is not admissible at l0={config.interface.l0:g}",
                report.to_dict(),
            )
        pot, _, profile = prepare_profile(config)
        state = service.dress(config, profile, geom)
        store.write_field("field", state)
        summary = service.summary(config, state, pot, geom, profile)
        store.write_json("dress.json", summary)
        return {"admissible": True, "mass_full": summary["mass_full"]}

    return execute(args, "dress", body)


# -------------------------------------------------
# ENERGY CHECK (CANHAM-HELFRICH LADDER)
# -------------------------------------------------
def energy_check(args) -> int:
    def body(config, store):
        pot = potentials.build(config.potential)
        profile0 = homoclinics.solve(config, pot)
        table, checks = service.energy_check(config, pot, profile0)
        store.write_csv("canham_helfrich.csv", table)
        return checks

    return execute(args, "energy-check", body)


def register(subparsers):
    add_command(subparsers, "dress", dress, "dress the configured curve with the bilayer profile")
    add_command(subparsers, "energy-check", energy_check, "compare dressed energy and mass with the sharp-interface reduction")
