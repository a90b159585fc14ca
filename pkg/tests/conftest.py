import os
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return random.Random(20260)


@pytest.fixture(scope="session")
def fiber():
    """fiber_analysis memoized across modules; each fiber takes several seconds."""
    from fractions import Fraction

    from dpverify.family import fiber_analysis
    seen = {}

    def get(t0):
        t0 = Fraction(t0)
        if t0 not in seen:
            seen[t0] = fiber_analysis(t0)
        return seen[t0]
    return get
