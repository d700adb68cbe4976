from app.api.commands.common import add_command, execute, prepare_profile
from app.services.spectra.spectra_service import SpectraService

service = SpectraService()


# -------------------------------------------------
# SPECTRUM OF ONE PROFILE
# -------------------------------------------------
def spectrum(args) -> int:
    def body(config, store):
        pot, profile0, _ = prepare_profile(config)
        report = service.analyse(config, profile0, pot)
        store.write_csv("eigenvalues.csv", {"index": list(range(report.eigenvalues.size)), "lambda": report.eigenvalues})
        store.write_csv("collision.csv", service.table(report))
        store.write_json("spectrum.json", report.to_dict())

        essential = service.essential(pot, profile0.far_field)
        predictions = service.predict_pearling(config, report)
        store.write_json("pearling_prediction.json", [p.to_dict() for p in predictions])
        return {
            "collision_eigenvalues": len(report.collision_eigs),
            "collisions": len(report.collision_intervals),
            "theorem_check": report.theorem_check,
            "counts": report.counts,
            "kernel_residual": report.kernel_residual,
            "essential": essential,
            "table": service.table(report).to_dict(orient="records"),
        }

    return execute(args, "spectrum", body)


def register(subparsers):
    add_command(subparsers, "spectrum", spectrum, "collision eigenvalues of a regularized-billiard profile")
