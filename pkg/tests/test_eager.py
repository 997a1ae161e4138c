import random

import pytest
from hypothesis import given, strategies as st

from tbplan.eager import (InconsistentClauseError, check_eager_problem, check_eager_rule,
                          close_clause, is_consistent)
from tbplan.generators import random_consistent_clause, random_eager_problem
from tbplan.model import (PlanningProblem, SynchronizationRule, end, normalize_rule, start,
                          strict, weak)

from .oracles import entailed_pairs


def test_eager_clause_closure():
    c = close_clause({weak(start("a0"), start("a1")), weak(start("a1"), start("a0")),
                      weak(end("a0"), end("a1"))}, "a0")
    for pair in [(start("a0"), end("a0")), (start("a1"), end("a1")), (start("a0"), end("a1"))]:
        assert pair in c.strict
    assert c.strict <= c.weak
    assert (start("a0"), start("a1")) in c.weak and (start("a1"), start("a0")) in c.weak
    assert all((t, t) in c.weak for t in c.terms)
    assert is_consistent(c)


def test_empty_clause_closure():
    c = close_clause(set())
    assert c.terms == frozenset() and c.weak == frozenset() and c.strict == frozenset()


def test_reversed_self_atom_is_inconsistent():
    c = close_clause({weak(end("a1"), start("a1"))})
    assert (start("a1"), end("a1")) in c.strict
    assert (end("a1"), end("a1")) in c.strict
    assert not is_consistent(c)


def test_mixed_cycle_is_inconsistent():
    assert not is_consistent(close_clause({weak(start("a"), end("b")), strict(end("b"), start("a"))}))


def test_example_eager_rule(eager_problem):
    assert check_eager_rule(eager_problem.rules[0]).eager


def test_weak_start_variant_fails_condition_3(weak_start_problem):
    rep = check_eager_rule(weak_start_problem.rules[0])
    assert [(v.condition, v.pair) for v in rep.violations] == [(3, ("a0", "a1"))]


def test_rewriting_example(rewrite_problem):
    rule = rewrite_problem.rules[0]
    before = check_eager_rule(rule)
    assert not before.eager and {v.condition for v in before.violations} == {2}
    assert check_eager_rule(normalize_rule(rule)).eager


def test_problem_reports(eager_problem, weak_start_problem):
    assert check_eager_problem(eager_problem).eager
    assert check_eager_problem(PlanningProblem()).eager
    bad = weak_start_problem.rules[0]
    mixed = PlanningProblem(eager_problem.variables,
                            (eager_problem.rules[0], SynchronizationRule("bad", bad.trigger, bad.statements)))
    rep = check_eager_problem(mixed)
    assert not rep.eager and rep.rules() == {"bad"}


def test_inconsistent_rule_raises(eager_problem):
    rule = eager_problem.rules[0]
    stmt = rule.statements[0]
    broken = type(stmt)(stmt.quantifiers, stmt.clause | {strict(end("a1"), start("a0"))})
    with pytest.raises(InconsistentClauseError):
        check_eager_rule(SynchronizationRule("r", rule.trigger, (broken,)))


@given(st.integers(0, 10**6))
def test_closure_invariants(seed):
    c = close_clause(random_consistent_clause(random.Random(seed)))
    assert c.strict <= c.weak
    assert all((t, t) in c.weak for t in c.terms)
    for a, b in c.weak:
        for b2, d in c.weak:
            if b == b2:
                assert (a, d) in c.weak
                if (a, b) in c.strict or (b, d) in c.strict:
                    assert (a, d) in c.strict


@given(st.integers(0, 10**6))
def test_closure_idempotent(seed):
    c = close_clause(random_consistent_clause(random.Random(seed)))
    again = close_clause(c.atoms())
    assert again.weak == c.weak and again.strict == c.strict


@given(st.integers(0, 10**6))
def test_closure_matches_integer_entailment(seed):
    clause = random_consistent_clause(random.Random(seed))
    c = close_clause(clause)
    n = len(c.terms)
    weak_, strict_, models = entailed_pairs(clause, 0, max(4, n - 1))
    assert models > 0
    assert set(c.weak) == weak_ and set(c.strict) == strict_


@given(st.integers(0, 10**6))
def test_eagerness_invariant_under_renaming(seed):
    p = random_eager_problem(random.Random(seed))
    for rule in p.rules:
        ren = {"a1": "b7", "a2": "b3"}
        stmts = []
        for s in rule.statements:
            qs = tuple(type(q)(ren.get(q.token, q.token), q.variable, q.value) for q in s.quantifiers)
            atoms = frozenset(type(a)(type(a.lhs)(a.lhs.endpoint, ren.get(a.lhs.token, a.lhs.token)),
                                      type(a.rhs)(a.rhs.endpoint, ren.get(a.rhs.token, a.rhs.token)),
                                      a.strict) for a in s.clause)
            stmts.append(type(s)(qs, atoms))
        renamed = SynchronizationRule(rule.name, rule.trigger, tuple(stmts))
        assert check_eager_rule(renamed).eager == check_eager_rule(rule).eager
