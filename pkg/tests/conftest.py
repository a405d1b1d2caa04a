import os
import random

import pytest
from hypothesis import HealthCheck, settings

from morse_orbits.corpus import canonical_examples, special_examples, surface_zoo

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def zoo():
    return surface_zoo()


@pytest.fixture(scope="session")
def canonical():
    return canonical_examples()


@pytest.fixture(scope="session")
def special():
    return special_examples()


@pytest.fixture
def rng():
    return random.Random(int(os.environ.get("MORSE_ORBITS_SEED", "0")))
