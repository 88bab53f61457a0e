import numpy as np
import pytest

from footsim.models import JointLimits, ScenarioConfig
from footsim.sim.kinematics import default_chain


@pytest.fixture
def chain():
    return default_chain()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def limits():
    return JointLimits()


def random_joints(rng, n, limits=None):
    limits = limits or JointLimits()
    return rng.uniform(limits.lower_array, limits.upper_array, size=(n, 5))


def make_scenario(**overrides) -> ScenarioConfig:
    """Short scenario with compact phases, no object and no motion unless overridden."""
    duration = overrides.pop("duration", 3.0)
    step = duration / 6
    data = {
        "name": "test",
        "duration": duration,
        "phases": [
            {"label": label, "start": i * step, "end": (i + 1) * step}
            for i, label in enumerate(
                ["a_idle", "b_retrieve", "c_grasp_lift", "d_work", "e_disturb", "f_retreat"]
            )
        ],
    }
    data.update(overrides)
    return ScenarioConfig.model_validate(data)
