"""Problem-side domain types: state variables, rules, plans.

Everything here is immutable. Durations are plain positive integers: the
qualitative fragment fixes every duration bound to ``(1, +inf)`` so no
duration function is stored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

START = "start"
END = "end"

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")


class MalformedPlanError(ValueError):
    pass


def is_identifier(name: str) -> bool:
    return bool(_IDENT.match(name))


@dataclass(frozen=True, order=True)
class Term:
    endpoint: str
    token: str

    def __str__(self) -> str:
        return f"{self.endpoint}({self.token})"


def start(token: str) -> Term:
    return Term(START, token)


def end(token: str) -> Term:
    return Term(END, token)


@dataclass(frozen=True, order=True)
class Atom:
    """``lhs <= rhs`` when not strict, ``lhs < rhs`` otherwise."""

    lhs: Term
    rhs: Term
    strict: bool = False

    def __str__(self) -> str:
        op = "<" if self.strict else "<="
        return f"{self.lhs} {op} {self.rhs}"

    @property
    def terms(self) -> tuple[Term, Term]:
        return (self.lhs, self.rhs)


def weak(lhs: Term, rhs: Term) -> Atom:
    return Atom(lhs, rhs, False)


def strict(lhs: Term, rhs: Term) -> Atom:
    return Atom(lhs, rhs, True)


def equal(lhs: Term, rhs: Term) -> frozenset[Atom]:
    return frozenset({weak(lhs, rhs), weak(rhs, lhs)})


@dataclass(frozen=True, order=True)
class Quantifier:
    token: str
    variable: str
    value: str

    def __str__(self) -> str:
        return f"{self.token}[{self.variable}={self.value}]"


# The trigger has the same shape as a quantifier.
Trigger = Quantifier


@dataclass(frozen=True)
class ExistentialStatement:
    quantifiers: tuple[Quantifier, ...]
    clause: frozenset[Atom]

    def __post_init__(self):
        object.__setattr__(self, "quantifiers", tuple(self.quantifiers))
        object.__setattr__(self, "clause", frozenset(self.clause))

    def terms(self) -> frozenset[Term]:
        return frozenset(t for a in self.clause for t in a.terms)

    def tokens(self) -> frozenset[str]:
        return frozenset(t.token for t in self.terms())


@dataclass(frozen=True)
class SynchronizationRule:
    name: str
    trigger: Optional[Trigger]
    statements: tuple[ExistentialStatement, ...]

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))

    @property
    def triggerless(self) -> bool:
        return self.trigger is None

    def binding(self, statement: ExistentialStatement) -> dict[str, Quantifier]:
        """Token name -> (variable, value) for a statement, trigger included."""
        out = {q.token: q for q in statement.quantifiers}
        if self.trigger is not None:
            out[self.trigger.token] = self.trigger
        return out


@dataclass(frozen=True)
class StateVariable:
    name: str
    values: frozenset[str]
    transitions: Mapping[str, frozenset[str]] = field(hash=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", frozenset(self.values))
        trans = {v: frozenset(ws) for v, ws in dict(self.transitions).items()}
        object.__setattr__(self, "transitions", trans)

    def successors(self, value: str) -> frozenset[str]:
        return self.transitions.get(value, frozenset())

    def _key(self):
        return (self.name, self.values, tuple(sorted(self.transitions.items())))

    def __eq__(self, other):
        if not isinstance(other, StateVariable):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


@dataclass(frozen=True)
class PlanningProblem:
    variables: tuple[StateVariable, ...] = ()
    rules: tuple[SynchronizationRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "rules", tuple(self.rules))

    def variable(self, name: str) -> StateVariable:
        for x in self.variables:
            if x.name == name:
                return x
        raise KeyError(name)

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(sorted(x.name for x in self.variables))


@dataclass(frozen=True)
class Token:
    variable: str
    value: str
    duration: int


@dataclass(frozen=True)
class Timeline:
    variable: str
    tokens: tuple[Token, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def horizon(self) -> int:
        return sum(t.duration for t in self.tokens)

    def intervals(self) -> list[tuple[int, int]]:
        """(start, end) instants of each token."""
        out = []
        t = 0
        for tok in self.tokens:
            out.append((t, t + tok.duration))
            t += tok.duration
        return out


@dataclass(frozen=True)
class Plan:
    timelines: Mapping[str, Timeline] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "timelines", dict(self.timelines))

    def __hash__(self):
        return hash(tuple(sorted((k, v) for k, v in self.timelines.items())))

    @classmethod
    def from_lists(cls, timelines: Mapping[str, Iterable[tuple[str, int]]]) -> "Plan":
        """``Plan.from_lists({"x": [("v", 2), ("w", 3)]})``"""
        return cls({x: Timeline(x, tuple(Token(x, v, d) for v, d in toks))
                    for x, toks in timelines.items()})

    def as_lists(self) -> dict[str, list[tuple[str, int]]]:
        return {x: [(t.value, t.duration) for t in tl.tokens]
                for x, tl in sorted(self.timelines.items())}


def horizon(plan: Plan) -> int:
    hs = {tl.horizon() for tl in plan.timelines.values()}
    if len(hs) > 1:
        raise MalformedPlanError(f"timelines have different horizons: {sorted(hs)}")
    return hs.pop() if hs else 0


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    rule: Optional[str] = None
    statement: Optional[int] = None

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message,
                "rule": self.rule, "statement": self.statement}


def validate_problem(problem: PlanningProblem) -> list[Violation]:
    """Return every violated structural invariant; an empty list means valid."""
    out: list[Violation] = []
    domains: dict[str, frozenset[str]] = {}
    for x in problem.variables:
        if not is_identifier(x.name):
            out.append(Violation("bad-identifier", f"bad variable name {x.name!r}"))
        if x.name in domains:
            out.append(Violation("duplicate-variable", f"variable {x.name} declared twice"))
        domains[x.name] = x.values
        if not x.values:
            out.append(Violation("empty-domain", f"variable {x.name} has no values"))
        for v, ws in x.transitions.items():
            if v not in x.values:
                out.append(Violation("bad-transition",
                                     f"transition source {v} not a value of {x.name}"))
            for w in ws - x.values:
                out.append(Violation("bad-transition",
                                     f"transition target {w} not a value of {x.name}"))

    names = set()
    for rule in problem.rules:
        if rule.name in names:
            out.append(Violation("duplicate-rule", f"rule {rule.name} declared twice", rule.name))
        names.add(rule.name)
        out.extend(_validate_rule(rule, domains))
    return out


def _check_typed(q: Quantifier, domains, rule, idx) -> list[Violation]:
    if q.variable not in domains:
        return [Violation("unknown-variable", f"unknown variable {q.variable}", rule, idx)]
    if q.value not in domains[q.variable]:
        return [Violation("unknown-value",
                          f"{q.value} is not a value of {q.variable}", rule, idx)]
    return []


def _validate_rule(rule: SynchronizationRule, domains) -> list[Violation]:
    out: list[Violation] = []
    r = rule.name
    if rule.trigger is not None:
        out.extend(_check_typed(rule.trigger, domains, r, None))
    if not rule.statements:
        out.append(Violation("no-statements", "rule has no existential statements", r))
    for i, st in enumerate(rule.statements):
        seen = set()
        for q in st.quantifiers:
            if q.token in seen or (rule.trigger and q.token == rule.trigger.token):
                out.append(Violation("duplicate-token", f"token {q.token} bound twice", r, i))
            seen.add(q.token)
            out.extend(_check_typed(q, domains, r, i))
        used = st.tokens()
        allowed = set(seen) | ({rule.trigger.token} if rule.trigger else set())
        for tok in sorted(used - allowed):
            out.append(Violation("unknown-token", f"unknown token name {tok}", r, i))
        for q in st.quantifiers:
            if q.token not in used:
                out.append(Violation("unused-quantifier",
                                     f"quantified token {q.token} occurs in no atom", r, i))
        if rule.trigger is not None:
            terms = st.terms()
            a0 = rule.trigger.token
            if start(a0) not in terms:
                out.append(Violation("trigger-start-missing",
                                     f"start({a0}) does not occur", r, i))
            if end(a0) not in terms:
                out.append(Violation("trigger-end-missing",
                                     f"end({a0}) does not occur", r, i))
    return out


def is_self_atom(atom: Atom) -> bool:
    return (atom.lhs.token == atom.rhs.token
            and atom.lhs.endpoint == START and atom.rhs.endpoint == END)


def normalize_rule(rule: SynchronizationRule) -> SynchronizationRule:
    """Drop ``start(a) <= end(a)`` / ``start(a) < end(a)`` atoms; they hold tacitly."""
    stmts = tuple(
        ExistentialStatement(st.quantifiers,
                             frozenset(a for a in st.clause if not is_self_atom(a)))
        for st in rule.statements)
    return SynchronizationRule(rule.name, rule.trigger, stmts)


def normalize_problem(problem: PlanningProblem) -> PlanningProblem:
    return PlanningProblem(problem.variables,
                           tuple(normalize_rule(r) for r in problem.rules))
