"""Seeded random generators for clauses, problems and plans."""
from __future__ import annotations

import random
from typing import Optional

from .eager import InconsistentClauseError, check_eager_rule, close_clause, is_consistent
from .model import (Atom, ExistentialStatement, Plan, PlanningProblem, Quantifier,
                    StateVariable, SynchronizationRule, Timeline, Token, end,
                    normalize_rule, start, validate_problem)


def random_atom(rng: random.Random, tokens: list[str], p_strict: float = 0.3) -> Atom:
    terms = [f(t) for t in tokens for f in (start, end)]
    a, b = rng.sample(terms, 2) if len(terms) > 1 else (terms[0], terms[0])
    return Atom(a, b, rng.random() < p_strict)


def random_clause(rng: random.Random, max_tokens: int = 3, max_atoms: int = 5,
                  p_strict: float = 0.3) -> frozenset[Atom]:
    tokens = [f"a{i}" for i in range(rng.randint(1, max_tokens))]
    n = rng.randint(1, max_atoms)
    return frozenset(random_atom(rng, tokens, p_strict) for _ in range(n))


def random_consistent_clause(rng: random.Random, **kw) -> frozenset[Atom]:
    while True:
        c = random_clause(rng, **kw)
        if is_consistent(close_clause(c)):
            return c


def random_variables(rng: random.Random, max_vars: int = 2,
                     max_values: int = 3) -> tuple[StateVariable, ...]:
    out = []
    for i in range(rng.randint(1, max_vars)):
        values = [f"v{j}" for j in range(rng.randint(1, max_values))]
        trans = {v: frozenset(w for w in values if rng.random() < 0.5) for v in values}
        out.append(StateVariable(f"x{i}", frozenset(values), trans))
    return tuple(out)


def _random_statement(rng, variables, trigger: Optional[Quantifier], max_quantifiers,
                      max_atoms, p_strict) -> ExistentialStatement:
    quants = []
    for j in range(rng.randint(0 if trigger else 1, max_quantifiers)):
        x = rng.choice(variables)
        quants.append(Quantifier(f"a{j + 1}", x.name, rng.choice(sorted(x.values))))
    tokens = [q.token for q in quants] + ([trigger.token] if trigger else [])
    atoms = set()
    n = rng.randint(1, max_atoms)
    for _ in range(n):
        atoms.add(random_atom(rng, tokens, p_strict))
    # make every token (and both trigger endpoints) occur
    def terms():
        return {t for a in atoms for t in a.terms}
    others = lambda tok: [t for t in tokens if t != tok] or [tok]
    for q in quants:
        if not any(t.token == q.token for t in terms()):
            other = rng.choice(others(q.token))
            atoms.add(Atom(rng.choice([start, end])(q.token),
                           rng.choice([start, end])(other), rng.random() < p_strict))
    if trigger:
        a0 = trigger.token
        for f in (start, end):
            if f(a0) not in terms():
                other = rng.choice(others(a0))
                g = rng.choice([start, end])
                pair = (f(a0), g(other)) if rng.random() < 0.5 else (g(other), f(a0))
                atoms.add(Atom(pair[0], pair[1], rng.random() < p_strict))
    return ExistentialStatement(tuple(quants), frozenset(atoms))


def random_rule(rng: random.Random, name: str, variables, max_statements: int = 2,
                max_quantifiers: int = 2, max_atoms: int = 4, p_strict: float = 0.3,
                p_trigger: float = 0.6) -> SynchronizationRule:
    trigger = None
    if rng.random() < p_trigger:
        x = rng.choice(variables)
        trigger = Quantifier("a0", x.name, rng.choice(sorted(x.values)))
    stmts = tuple(_random_statement(rng, variables, trigger, max_quantifiers, max_atoms, p_strict)
                  for _ in range(rng.randint(1, max_statements)))
    return SynchronizationRule(name, trigger, stmts)


def random_eager_rule(rng: random.Random, name: str, variables, **kw) -> SynchronizationRule:
    while True:
        rule = normalize_rule(random_rule(rng, name, variables, **kw))
        probe = PlanningProblem(variables, (rule,))
        if validate_problem(probe):
            continue
        try:
            if check_eager_rule(rule).eager:
                return rule
        except InconsistentClauseError:
            continue


def random_eager_problem(rng: random.Random, max_vars: int = 2, max_values: int = 3,
                         max_rules: int = 2, max_statements: int = 2,
                         max_quantifiers: int = 2, **kw) -> PlanningProblem:
    variables = random_variables(rng, max_vars, max_values)
    rules = tuple(random_eager_rule(rng, f"r{i}", variables, max_statements=max_statements,
                                    max_quantifiers=max_quantifiers, **kw)
                  for i in range(rng.randint(1, max_rules)))
    return PlanningProblem(variables, rules)


def random_plan(rng: random.Random, variables, h: int) -> Plan:
    """A plan of horizon ``h`` respecting every transition function (falls back to
    one long token when a random walk gets stuck)."""
    tls = {}
    for x in variables:
        toks = []
        left = h
        cur = None
        while left > 0:
            choices = sorted(x.values) if cur is None else sorted(x.successors(cur) & x.values)
            if not choices:
                if not toks:
                    break
                last = toks.pop()
                toks.append(Token(x.name, last.value, last.duration + left))
                left = 0
                break
            cur = rng.choice(choices)
            d = rng.randint(1, left)
            toks.append(Token(x.name, cur, d))
            left -= d
        tls[x.name] = Timeline(x.name, tuple(toks))
    return Plan(tls)
