import logging

from app.api.commands.common import add_command, configs, execute, homoclinics, prepare_profile, profile_table

logger = logging.getLogger(__name__)


# -------------------------------------------------
# HOMOCLINIC PROFILE
# -------------------------------------------------
def homoclinic(args) -> int:
    def body(config, store):
        pot, profile0, profile = prepare_profile(config)
        summary = homoclinics.summary(config, pot, profile0)
        store.write_csv("profile.csv", profile_table(profile0))
        store.write_json("profile.json", summary)

        if config.profile.continue_epsilon:
            store.write_csv("profile_eps.csv", profile_table(profile))
            store.write_json("profile_eps.json", profile.to_dict())
            corr = homoclinics.correctors(config, pot, profile0)
            table = {"z": corr.z}
            for i in range(profile0.dim):
                table[f"zeta{i + 1}"] = corr.zeta_h[i]
                table[f"phi1_{i + 1}"] = corr.phi_h1[i]
            store.write_csv("correctors.csv", table)
            store.write_json("correctors.json", corr.to_dict())

        sweep = homoclinics.sweep(config, pot)
        if sweep is not None:
            store.write_json("sweep.json", sweep.to_dict())

        return {
            "residual_norm": profile0.residual_norm,
            "hamiltonian_residual": summary["hamiltonian_residual"],
            "collisions": len(profile0.collision_times),
        }

    return execute(args, "homoclinic", body)


# -------------------------------------------------
# VALIDATE
# -------------------------------------------------
def validate(args) -> int:
    config = configs.load(args.config)
    logger.info("%s is valid (hash %s)", args.config, configs.config_hash(config)[:12])
    return 0


def register(subparsers):
    add_command(subparsers, "homoclinic", homoclinic, "solve the homoclinic profile of the configured potential")
    add_command(subparsers, "validate", validate, "check a configuration against the schema")
