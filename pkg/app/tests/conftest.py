import hypothesis
import numpy as np
import pytest

from app.schemas.run_schema import RunConfig
from app.services.homoclinic.homoclinic_service import HomoclinicService
from app.services.potentials.billiard_potential import universal_billiard
from app.services.potentials.smooth import decoupled_test_potential

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5)
hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.load_profile("ci")


# -------------------------------------------------
# CONFIGURATIONS
# -------------------------------------------------
@pytest.fixture
def make_config():
    """RunConfig from keyword blocks; params default to epsilon = 0.1."""

    def build(**blocks) -> RunConfig:
        blocks.setdefault("params", {"epsilon": 0.1})
        return RunConfig.model_validate(blocks)

    return build


# -------------------------------------------------
# POTENTIALS AND PROFILES
# -------------------------------------------------
@pytest.fixture(scope="session")
def decoupled():
    return decoupled_test_potential()


@pytest.fixture(scope="session")
def universal():
    return universal_billiard(0.875)


@pytest.fixture(scope="session")
def sech_profile(decoupled):
    """Homoclinic of the decoupled potential on [-20, 20] with 4001 nodes."""
    config = RunConfig.model_validate({"params": {"epsilon": 0.1}, "potential": {"kind": "decoupled"}})
    return HomoclinicService().solve(config, decoupled)


@pytest.fixture(scope="session")
def sech_exact(sech_profile):
    return 1.5 / np.cosh(0.5 * sech_profile.z) ** 2
