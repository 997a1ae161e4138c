"""Automaton-free semantics: check plans against rules by direct matching.

This module is the ground truth the automata are tested against, so it
deliberately shares nothing with them beyond the model types.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional

from .model import (END, Atom, ExistentialStatement, Plan, PlanningProblem,
                    StateVariable, SynchronizationRule, Timeline, Token, horizon)


class PlanMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    variable: str
    index: int
    value: str
    start: int
    end: int


# token name -> concrete token
MatchAssignment = dict[str, Interval]


def plan_intervals(plan: Plan) -> dict[tuple[str, str], list[Interval]]:
    out: dict[tuple[str, str], list[Interval]] = {}
    for x, tl in plan.timelines.items():
        t = 0
        for i, tok in enumerate(tl.tokens):
            out.setdefault((x, tok.value), []).append(Interval(x, i, tok.value, t, t + tok.duration))
            t += tok.duration
    return out


def _time(term, assignment: MatchAssignment) -> int:
    iv = assignment[term.token]
    return iv.end if term.endpoint == END else iv.start


def atom_holds(atom: Atom, assignment: MatchAssignment, plan: Optional[Plan] = None) -> bool:
    a = _time(atom.lhs, assignment)
    b = _time(atom.rhs, assignment)
    return a < b if atom.strict else a <= b


def _matches(statement: ExistentialStatement, fixed: MatchAssignment,
             intervals) -> Iterator[MatchAssignment]:
    quants = list(statement.quantifiers)
    # atoms become checkable once their last token is bound
    order = [q.token for q in quants]
    bound_at = {}
    for atom in statement.clause:
        idx = max((order.index(t.token) if t.token in order else -1) for t in atom.terms)
        bound_at.setdefault(idx, []).append(atom)
    assignment = dict(fixed)
    if not all(atom_holds(a, assignment) for a in bound_at.get(-1, ())):
        return

    def go(i):
        if i == len(quants):
            yield dict(assignment)
            return
        q = quants[i]
        for iv in intervals.get((q.variable, q.value), ()):
            assignment[q.token] = iv
            if all(atom_holds(a, assignment) for a in bound_at.get(i, ())):
                yield from go(i + 1)
        assignment.pop(q.token, None)

    yield from go(0)


def statement_satisfied(statement: ExistentialStatement, trigger: Optional[tuple[str, Interval]],
                        plan: Plan, intervals=None) -> bool:
    """``trigger`` is ``(token name, concrete token)`` or None for triggerless rules."""
    if intervals is None:
        intervals = plan_intervals(plan)
    fixed = {trigger[0]: trigger[1]} if trigger else {}
    return next(_matches(statement, fixed, intervals), None) is not None


@dataclass(frozen=True)
class Failure:
    rule: str
    trigger_position: Optional[int]   # index of the trigger token in its timeline

    def as_dict(self) -> dict:
        return {"rule": self.rule, "trigger": self.trigger_position}


def rule_failures(rule: SynchronizationRule, plan: Plan, intervals=None) -> list[Failure]:
    if intervals is None:
        intervals = plan_intervals(plan)
    if rule.trigger is None:
        if any(statement_satisfied(st, None, plan, intervals) for st in rule.statements):
            return []
        return [Failure(rule.name, None)]
    out = []
    trig = rule.trigger
    for iv in intervals.get((trig.variable, trig.value), ()):
        if not any(statement_satisfied(st, (trig.token, iv), plan, intervals)
                   for st in rule.statements):
            out.append(Failure(rule.name, iv.index))
    return out


def verify_plan(plan: Plan, problem: PlanningProblem) -> list[Failure]:
    """Empty list iff ``plan`` is a solution plan for ``problem``."""
    names = set(problem.variable_names)
    if set(plan.timelines) != names:
        raise PlanMismatchError(
            f"plan variables {sorted(plan.timelines)} != problem variables {sorted(names)}")
    for x, tl in plan.timelines.items():
        var = problem.variable(x)
        for i, tok in enumerate(tl.tokens):
            if tok.value not in var.values or tok.duration < 1 or tok.variable != x:
                raise PlanMismatchError(f"bad token {i} on {x}: {tok}")
            if i and tok.value not in var.successors(tl.tokens[i - 1].value):
                raise PlanMismatchError(f"{x}: {tl.tokens[i - 1].value} -> {tok.value} not allowed")
    horizon(plan)
    intervals = plan_intervals(plan)
    out = []
    for rule in problem.rules:
        out.extend(rule_failures(rule, plan, intervals))
    return out


def _compositions(h: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write h as a sum of positive parts; shorter-first-part ascending."""
    if h == 0:
        yield ()
        return
    for first in range(1, h + 1):
        for rest in _compositions(h - first):
            yield (first,) + rest


def timelines_of(var: StateVariable, h: int) -> list[Timeline]:
    return list(_timelines_cached(var.name, tuple(sorted(var.values)),
                                  tuple(sorted((v, tuple(sorted(ws))) for v, ws in var.transitions.items())),
                                  h))


@lru_cache(maxsize=4096)
def _timelines_cached(name, values, transitions, h) -> tuple[Timeline, ...]:
    succ = dict(transitions)
    out = []

    def seqs(n, prev):
        if n == 0:
            yield ()
            return
        choices = values if prev is None else [w for w in succ.get(prev, ()) if w in values]
        for v in sorted(choices):
            for rest in seqs(n - 1, v):
                yield (v,) + rest

    for durs in _compositions(h):
        for vals in seqs(len(durs), None):
            out.append(Timeline(name, tuple(Token(name, v, d) for v, d in zip(vals, durs))))
    return tuple(out)


def plans_of_horizon(problem: PlanningProblem, h: int) -> Iterator[Plan]:
    names = problem.variable_names
    per_var = [timelines_of(problem.variable(x), h) for x in names]
    for combo in product(*per_var):
        yield Plan(dict(zip(names, combo)))


def brute_force_exists(problem: PlanningProblem, max_horizon: int,
                       min_horizon: int = 1) -> Optional[Plan]:
    """Smallest-horizon solution plan up to ``max_horizon`` in enumeration order, or None."""
    for h in range(min_horizon, max_horizon + 1):
        for plan in plans_of_horizon(problem, h):
            intervals = plan_intervals(plan)
            if all(not rule_failures(r, plan, intervals) for r in problem.rules):
                return plan
    return None
