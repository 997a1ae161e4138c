import random

import pytest
from hypothesis import given, settings, strategies as st

from tbplan.dsl import parse_problem
from tbplan.generators import random_eager_problem
from tbplan.model import horizon
from tbplan.oracle import brute_force_exists, verify_plan
from tbplan.rules_automaton import LITERAL
from tbplan.solver import (SAT, UNSAT_BOUNDED, UNSAT_PROVED, InvalidProblemError,
                           NonEagerProblemError, SoundnessError, accepts_empty_word, solve)

from .conftest import VARS

STEP_SRC = """
var x { values a, b; trans a -> {b}; trans b -> {b}; }
rule r: true => exists p[x=a] q[x=b]. end(p) = start(q);
"""


def test_eager_is_sat(eager_problem):
    r = solve(eager_problem)
    assert r.status == SAT and len(r.word) == 1
    assert verify_plan(r.plan, eager_problem) == []


def test_strict_is_unsat_proved(strict_problem):
    assert solve(strict_problem).status == UNSAT_PROVED


def test_strict_literal_mode_is_unsound(strict_problem):
    with pytest.raises(SoundnessError) as e:
        solve(strict_problem, empty_viewpoint=LITERAL)
    assert e.value.failures


def test_non_eager_rejected(weak_start_problem):
    with pytest.raises(NonEagerProblemError) as e:
        solve(weak_start_problem)
    assert not e.value.report.eager


def test_rewritten_problem_lacks_trigger_end(rewrite_problem):
    with pytest.raises(InvalidProblemError) as e:
        solve(rewrite_problem)
    assert [v.code for v in e.value.violations] == ["trigger-end-missing"]


def test_invalid_rejected():
    p = parse_problem(VARS + "rule r: a0[x0=v0] => exists a1[x1=v1]. end(a0) <= end(a1);")
    with pytest.raises(InvalidProblemError):
        solve(p)


def test_bounded():
    p = parse_problem(STEP_SRC)
    assert solve(p, max_len=1).status == UNSAT_BOUNDED
    r = solve(p, max_len=2)
    assert r.status == SAT and r.plan.as_lists() == {"x": [("a", 1), ("b", 1)]}


def test_jobs_give_same_result():
    p = parse_problem(STEP_SRC)
    a, b = solve(p, jobs=1), solve(p, jobs=3)
    assert a.word == b.word and a.explored == b.explored


def test_empty_word(eager_problem):
    assert accepts_empty_word(eager_problem)
    assert not accepts_empty_word(parse_problem(STEP_SRC))


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_agrees_with_brute_force(seed):
    p = random_eager_problem(random.Random(seed))
    r = solve(p, max_len=4)
    plan = brute_force_exists(p, 4)
    assert r.sat == (plan is not None)
    if r.sat:
        assert horizon(r.plan) == horizon(plan)


def test_empty_word_with_triggerless_rule():
    p = parse_problem(VARS + "rule r: true => exists b[x1=v1] c[x0=v0]. start(b) = start(c);")
    assert not accepts_empty_word(p)
    assert solve(p).status == SAT


def test_empty_word_on_invalid_problem():
    # normalization drops the only atom, leaving b unconstrained
    p = parse_problem(VARS + "rule r: true => exists b[x1=v1]. start(b) < end(b);")
    with pytest.raises(InvalidProblemError):
        accepts_empty_word(p)
