"""Allen's interval relations as atom conjunctions, and their eagerness.

The classification is computed: each encoding is wrapped in a one-statement
rule and handed to the eager checker.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .eager import check_eager_rule
from .model import (Atom, ExistentialStatement, Quantifier, SynchronizationRule,
                    end, equal, start, strict)

RELATIONS = ("before", "after", "meets", "met-by", "starts", "started-by",
             "ends", "ended-by", "overlaps", "overlapped-by", "during",
             "contains", "equals")

TRIGGER = "trigger-involved"
NO_TRIGGER = "no-trigger"
CONTEXTS = (TRIGGER, NO_TRIGGER)

_INVERSE = {
    "before": "after", "meets": "met-by", "starts": "started-by",
    "ends": "ended-by", "overlaps": "overlapped-by", "during": "contains",
    "equals": "equals",
}
_INVERSE.update({v: k for k, v in list(_INVERSE.items())})


def inverse(rel: str) -> str:
    return _INVERSE[_check(rel)]


def _check(rel: str) -> str:
    if rel not in RELATIONS:
        raise ValueError(f"unknown Allen relation {rel!r}")
    return rel


def encode(rel: str, a: str, b: str) -> frozenset[Atom]:
    if a == b:
        raise ValueError(f"Allen relation between {a} and itself")
    _check(rel)
    if rel == "before":
        return frozenset({strict(end(a), start(b))})
    if rel == "meets":
        return equal(end(a), start(b))
    if rel == "starts":
        return equal(start(a), start(b)) | {strict(end(a), end(b))}
    if rel == "ends":
        return {strict(start(b), start(a))} | equal(end(a), end(b))
    if rel == "overlaps":
        return frozenset({strict(start(a), start(b)), strict(start(b), end(a)),
                          strict(end(a), end(b))})
    if rel == "during":
        return frozenset({strict(start(b), start(a)), strict(end(a), end(b))})
    if rel == "equals":
        return equal(start(a), start(b)) | equal(end(a), end(b))
    # inverse relations swap the arguments
    return encode(inverse(rel), b, a)


@dataclass(frozen=True)
class Classification:
    relation: str
    context: str
    eager: bool
    conditions: tuple[int, ...] = ()
    # trigger context only: the same relation with ``b`` as the trigger
    mirrored_eager: Optional[bool] = None
    mirrored_conditions: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        out = {"relation": self.relation, "context": self.context,
               "eager": self.eager, "conditions": list(self.conditions)}
        if self.mirrored_eager is not None:
            out["mirrored"] = {"eager": self.mirrored_eager,
                               "conditions": list(self.mirrored_conditions)}
        return out

    def __str__(self):
        ctx = "trigger" if self.context == TRIGGER else "no-trigger"
        line = f"{self.relation} / {ctx} -> {_verdict(self.eager, self.conditions)}"
        if self.mirrored_eager is not None:
            line += f"  [b as trigger: {_verdict(self.mirrored_eager, self.mirrored_conditions)}]"
        return line


def _verdict(eager: bool, conds) -> str:
    if eager:
        return "eager"
    return "non-eager (" + ", ".join(f"C{c}" for c in conds) + ")"


def relation_rule(rel: str, context: str, trigger: str = "a") -> SynchronizationRule:
    """One-statement rule over ``a rel b``; in trigger context ``trigger`` names the trigger."""
    a, b = "a", "b"
    clause = encode(rel, a, b)
    if context == TRIGGER:
        other = b if trigger == a else a
        stmt = ExistentialStatement((Quantifier(other, "x", "v"),), clause)
        return SynchronizationRule(rel, Quantifier(trigger, "x", "v"), (stmt,))
    if context == NO_TRIGGER:
        stmt = ExistentialStatement((Quantifier(a, "x", "v"), Quantifier(b, "x", "v")), clause)
        return SynchronizationRule(rel, None, (stmt,))
    raise ValueError(f"unknown context {context!r}")


def _run(rule):
    report = check_eager_rule(rule)
    return report.eager, tuple(sorted({v.condition for v in report.violations}))


def classify(rel: str, context: str) -> Classification:
    eager, conds = _run(relation_rule(rel, context))
    if context != TRIGGER:
        return Classification(rel, context, eager, conds)
    m_eager, m_conds = _run(relation_rule(rel, TRIGGER, trigger="b"))
    return Classification(rel, context, eager, conds, m_eager, m_conds)


def eager_set(context: str) -> set[str]:
    return {rel for rel in RELATIONS if classify(rel, context).eager}


def table() -> list[Classification]:
    return [classify(rel, ctx) for rel in RELATIONS for ctx in CONTEXTS]
