import numpy as np

from app.api.commands.common import add_command, execute, homoclinics, potentials, series_columns
from app.services.geoflow.geoflow_service import GeoflowService
from app.utils.exceptions import GeometricBreakdownError

service = GeoflowService()


def resolve_moments(config, pot=None, need_M: bool = False):
    """Configured moments, or those of the solved profile."""
    g = config.geoflow
    if g.M1 is not None and g.M2 is not None and (g.M is not None or not need_M):
        return service.moments(config)
    pot = pot or potentials.build(config.potential)
    return service.moments(config, homoclinics.solve(config, pot))


def radial_table(trajectory) -> dict:
    table = {"tau": trajectory.taus}
    table.update(series_columns("R_", trajectory.radii))
    table["b2_dot_m"] = trajectory.b2_dot_m
    return table


# -------------------------------------------------
# TAU1 QUENCH
# -------------------------------------------------
def tau1(args) -> int:
    def body(config, store):
        pot = potentials.build(config.potential)
        M, _, M2 = resolve_moments(config, pot, need_M=True)
        traj = service.tau1(config, pot, M, M2)
        table = {"tau": traj.taus, "E": traj.E}
        table.update(series_columns("B1_", traj.B1))
        table.update(series_columns("R_", traj.radii))
        store.write_csv("tau1.csv", table)
        summary = traj.to_dict()
        summary["B1_final"] = traj.B1_final.tolist()
        store.write_json("tau1.json", summary)
        return {
            "E_final": float(traj.E[-1]),
            "monotone": traj.monotone,
            "mass_residual": traj.mass_residual,
            "B1_vanishes": bool(np.max(np.abs(traj.B1_final)) < 1e-8),
        }

    return execute(args, "tau1", body)


# -------------------------------------------------
# RADIAL WILLMORE
# -------------------------------------------------
def willmore_radial(args) -> int:
    def body(config, store):
        _, M1, M2 = resolve_moments(config)
        traj, stability = service.radial(config, M1, M2)
        store.write_csv("radial.csv", radial_table(traj))
        store.write_json("events.json", traj.events)
        store.write_json("stability.json", stability)
        return {"conserved_drift": traj.conserved_drift, "extinctions": len(traj.events), **stability}

    return execute(args, "willmore-radial", body)


# -------------------------------------------------
# CURVE WILLMORE
# -------------------------------------------------
def willmore_curve(args) -> int:
    def body(config, store):
        _, M1, M2 = resolve_moments(config)
        traj = service.curve(config, M1, M2)
        store.write_csv("curve.csv", {"t": traj.times, "length": traj.lengths})
        rows = {"t": [], "node": [], "x": [], "y": []}
        for t, pts in traj.snapshots:
            n = pts.shape[1]
            rows["t"].extend([t] * n)
            rows["node"].extend(range(n))
            rows["x"].extend(pts[0])
            rows["y"].extend(pts[1])
        store.write_csv("curve_snapshots.csv", rows)
        store.write_json("curve.json", traj.to_dict())
        lengths = np.asarray(traj.lengths)
        if traj.breakdown:
            raise GeometricBreakdownError(traj.breakdown, {"time": traj.times[-1]})
        return {
            "length_drift": float(np.max(np.abs(lengths - lengths[0])) / lengths[0]),
            "projection_defect": traj.projection_defect,
        }

    return execute(args, "willmore-curve", body)


def register(subparsers):
    add_command(subparsers, "tau1", tau1, "quenched curvature flow with background decay")
    add_command(subparsers, "willmore-radial", willmore_radial, "radial Willmore flow of a sphere family")
    add_command(subparsers, "willmore-curve", willmore_curve, "area-preserving Willmore flow of a planar curve")
