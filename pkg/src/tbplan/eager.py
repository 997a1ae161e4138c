"""Transitive closure of clauses, consistency, and the eager-rule conditions."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Optional

from .model import (END, START, Atom, PlanningProblem, SynchronizationRule, Term,
                    end, start)


class InconsistentClauseError(ValueError):
    def __init__(self, rule: Optional[str], statement: Optional[int], pair=None):
        self.rule = rule
        self.statement = statement
        self.pair = pair
        super().__init__(f"inconsistent clause in rule {rule}, statement {statement}"
                         + (f": {pair[0]} < {pair[1]}" if pair else ""))


@dataclass(frozen=True)
class ClosedClause:
    terms: frozenset[Term]
    weak: frozenset[tuple[Term, Term]]
    strict: frozenset[tuple[Term, Term]]
    trigger: Optional[str] = None

    def le(self, a: Term, b: Term) -> bool:
        return (a, b) in self.weak

    def lt(self, a: Term, b: Term) -> bool:
        return (a, b) in self.strict

    def tokens(self) -> frozenset[str]:
        return frozenset(t.token for t in self.terms)

    def atoms(self) -> frozenset[Atom]:
        return frozenset([Atom(a, b, False) for a, b in self.weak]
                         + [Atom(a, b, True) for a, b in self.strict])


def close_clause(clause: Iterable[Atom], trigger: Optional[str] = None) -> ClosedClause:
    """Least set of atoms containing ``clause`` and closed under the six closure rules.

    Runs the rules as a plain fixpoint over a weak and a strict relation.
    """
    clause = list(clause)
    terms = frozenset(t for a in clause for t in a.terms)
    weak = {(a.lhs, a.rhs) for a in clause if not a.strict}
    strict = {(a.lhs, a.rhs) for a in clause if a.strict}
    weak |= {(t, t) for t in terms}                                 # (i)
    for t in terms:                                                 # (ii)
        if t.endpoint == START and end(t.token) in terms:
            strict.add((t, end(t.token)))

    changed = True
    while changed:
        changed = False
        new_weak = set(strict)                                      # (iii)
        new_strict = set()
        succ_weak: dict[Term, set[Term]] = {}
        for a, b in weak:
            succ_weak.setdefault(a, set()).add(b)
        for a, b in weak:
            for c in succ_weak.get(b, ()):
                new_weak.add((a, c))                                # (iv)
        for a, b in strict:
            for c in succ_weak.get(b, ()):
                new_strict.add((a, c))                              # (v)
        succ_strict: dict[Term, set[Term]] = {}
        for a, b in strict:
            succ_strict.setdefault(a, set()).add(b)
        for a, b in weak:
            for c in succ_strict.get(b, ()):
                new_strict.add((a, c))                              # (vi)
        if not new_weak <= weak or not new_strict <= strict:
            weak |= new_weak
            strict |= new_strict
            changed = True
    return ClosedClause(terms, frozenset(weak), frozenset(strict), trigger)


def is_consistent(closed: ClosedClause) -> bool:
    return not any(a == b for a, b in closed.strict)


@dataclass(frozen=True)
class EagerViolation:
    rule: str
    statement: int
    condition: int
    pair: tuple[str, str]

    def as_dict(self) -> dict:
        return {"rule": self.rule, "statement": self.statement,
                "condition": self.condition, "pair": list(self.pair)}


@dataclass(frozen=True)
class EagerReport:
    violations: tuple[EagerViolation, ...] = field(default_factory=tuple)

    @property
    def eager(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def as_dict(self) -> dict:
        return {"eager": self.eager, "violations": [v.as_dict() for v in self.violations]}


def clause_violations(closed: ClosedClause, trigger: Optional[str]) -> list[tuple[int, tuple[str, str]]]:
    """(condition, (a1, a2)) for every failed eager condition on one closed clause."""
    out = []
    le = closed.le
    for a1, a2 in permutations(sorted(closed.tokens()), 2):
        t1 = a1 == trigger
        t2 = a2 == trigger
        if not t1 and not t2:
            if (le(start(a2), end(a1)) and le(end(a1), end(a2))
                    and not le(end(a1), start(a2))):
                out.append((1, (a1, a2)))
        if not t2:
            if (le(start(a2), start(a1)) and le(start(a1), end(a2))
                    and not le(start(a1), start(a2))):
                out.append((2, (a1, a2)))
        if t1 and not t2:
            if (le(start(a1), start(a2)) and le(end(a1), end(a2))
                    and not le(start(a2), start(a1))):
                out.append((3, (a1, a2)))
    return out


def check_eager_rule(rule: SynchronizationRule) -> EagerReport:
    trig = rule.trigger.token if rule.trigger else None
    found = []
    for i, st in enumerate(rule.statements):
        closed = close_clause(st.clause, trig)
        if not is_consistent(closed):
            bad = min(p for p in closed.strict if p[0] == p[1])
            raise InconsistentClauseError(rule.name, i, bad)
        for cond, pair in clause_violations(closed, trig):
            found.append(EagerViolation(rule.name, i, cond, pair))
    return EagerReport(tuple(found))


def check_eager_problem(problem: PlanningProblem) -> EagerReport:
    found = []
    for rule in problem.rules:
        found.extend(check_eager_rule(rule).violations)
    return EagerReport(tuple(found))
