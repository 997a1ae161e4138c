import os

import pytest
from hypothesis import HealthCheck, settings

from tbplan.dsl import parse_problem

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

VARS = """
var x0 { values v0; trans v0 -> {v0}; }
var x1 { values v1; trans v1 -> {v1}; }
"""

EAGER_SRC = VARS + "rule r1: a0[x0=v0] => exists a1[x1=v1]. start(a0) = start(a1) & end(a0) <= end(a1);"
STRICT_SRC = VARS + "rule r1: a0[x0=v0] => exists a1[x1=v1]. start(a0) = start(a1) & end(a0) < end(a1);"
WEAK_START_SRC = VARS + "rule r1: a0[x0=v0] => exists a1[x1=v1]. start(a0) <= start(a1) & end(a0) <= end(a1);"
REWRITE_SRC = VARS + ("rule r1: a0[x0=v0] => exists a1[x1=v1]. "
                      "start(a1) < end(a1) & start(a0) = end(a1);")


@pytest.fixture
def eager_problem():
    return parse_problem(EAGER_SRC)


@pytest.fixture
def strict_problem():
    return parse_problem(STRICT_SRC)


@pytest.fixture
def weak_start_problem():
    return parse_problem(WEAK_START_SRC)


@pytest.fixture
def rewrite_problem():
    return parse_problem(REWRITE_SRC)
