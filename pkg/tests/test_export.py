import json
import random
import re

import pytest
from hypothesis import given, strategies as st

from tbplan.dsl import parse_problem
from tbplan.export import PlanSchemaError, export_dot, plan_from_json, plan_to_json
from tbplan.generators import random_plan, random_variables
from tbplan.model import PlanningProblem, StateVariable


def _nodes(dot):
    return re.findall(r"^\s*(\w+) \[label=", dot, re.M)


def test_tsv_dot_single_value():
    p = PlanningProblem((StateVariable("x", {"v"}, {"v": {"v"}}),), ())
    dot = export_dot(p, "tsv")
    # initial, after the first symbol, and after a change v -> v
    assert len(_nodes(dot)) == 3
    assert dot.count(" -> ") == 5


def test_empty_problem_product_dot():
    p = PlanningProblem((StateVariable("x", {"v"}, {"v": {"v"}}),), ())
    dot = export_dot(p, "product")
    assert len(_nodes(dot)) == 4
    assert '[label="sink"]' in dot


def test_blueprint_dot(eager_problem, strict_problem):
    dot = export_dot(eager_problem, "blueprints")
    assert len(re.findall(r"_v\d+ \[label=", dot)) == 3
    assert dot.count("arrowhead=normalnormal") == 1
    assert export_dot(strict_problem, "blueprints").count("arrowhead=normalnormal") == 2


def test_ap_dot(eager_problem):
    dot = export_dot(eager_problem, "ap", max_len=3)
    assert dot.startswith("digraph ap")
    assert len(_nodes(dot)) >= 2


def test_unknown_target(eager_problem):
    with pytest.raises(ValueError):
        export_dot(eager_problem, "nope")


@given(st.integers(0, 10**6), st.integers(0, 6))
def test_plan_json_round_trip(seed, h):
    rng = random.Random(seed)
    plan = random_plan(rng, random_variables(rng, 3), h)
    data = json.loads(json.dumps(plan_to_json(plan)))
    assert plan_from_json(data) == plan


@pytest.mark.parametrize("data", [
    [],
    {"horizon": 1},
    {"horizon": -1, "timelines": {}},
    {"horizon": True, "timelines": {}},
    {"horizon": 1, "timelines": []},
    {"horizon": 1, "timelines": {"x": {}}},
    {"horizon": 1, "timelines": {"x": [{"value": "v", "duration": 0}]}},
    {"horizon": 1, "timelines": {"x": [{"value": "v", "duration": 1, "extra": 1}]}},
    {"horizon": 2, "timelines": {"x": [{"value": "v", "duration": 1}]}},
    {"horizon": 1, "timelines": {}, "other": 1},
])
def test_plan_schema_errors(data):
    with pytest.raises(PlanSchemaError):
        plan_from_json(data)
