import itertools
import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bnnplan.bnn import simulate
from bnnplan.domains import random_instance

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

MINISOLVER = f"{sys.executable} -m bnnplan.minisolver"


def all_plans(problem):
    steps = list(itertools.product((False, True), repeat=problem.n_action))
    return itertools.product(steps, repeat=problem.horizon)


def enumerate_plans(problem, bnn):
    """Naive oracle: every plan with its simulated trajectory."""
    return [(plan, simulate(bnn, problem, plan)) for plan in all_plans(problem)]


@pytest.fixture
def toy():
    return random_instance(seed=11, n_state=3, n_action=2, hidden=(4,), horizon=3)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
