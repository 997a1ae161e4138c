"""Blueprints (DAGs of term classes) and snapshot evolution.

A snapshot is a blueprint together with a downward closed set ``K`` of
vertex indices; here ``K`` is a plain ``frozenset[int]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .eager import ClosedClause, InconsistentClauseError, close_clause, is_consistent
from .model import START, ExistentialStatement, SynchronizationRule, Term, end, start
from .words import Event


@dataclass(frozen=True)
class Blueprint:
    ref: tuple[str, int]
    vertices: tuple[frozenset[Term], ...]
    arcs: frozenset[tuple[int, int, bool]]
    vertex_events: tuple[frozenset[Event], ...]
    trigger_start: Optional[int] = None
    trigger_end: Optional[int] = None
    end_obligations: tuple[frozenset[tuple[Event, int]], ...] = ()

    def __post_init__(self):
        preds = [set() for _ in self.vertices]
        strict_preds = [set() for _ in self.vertices]
        for u, v, s in self.arcs:
            preds[v].add(u)
            if s:
                strict_preds[v].add(u)
        object.__setattr__(self, "_preds", tuple(frozenset(p) for p in preds))
        object.__setattr__(self, "_strict_preds", tuple(frozenset(p) for p in strict_preds))

    def __len__(self):
        return len(self.vertices)

    @property
    def all_vertices(self) -> frozenset[int]:
        return frozenset(range(len(self.vertices)))

    def preds(self, v: int) -> frozenset[int]:
        return self._preds[v]

    def strict_preds(self, v: int) -> frozenset[int]:
        return self._strict_preds[v]

    def vertex_of(self, term: Term) -> Optional[int]:
        for i, cls in enumerate(self.vertices):
            if term in cls:
                return i
        return None

    def events_of(self, vs: Iterable[int]) -> frozenset[Event]:
        out = set()
        for v in vs:
            out |= self.vertex_events[v]
        return frozenset(out)

    def ancestors(self, v: int) -> frozenset[int]:
        seen = set()
        stack = list(self.preds(v))
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(self.preds(u))
        return frozenset(seen)

    def is_downward_closed(self, K: Iterable[int]) -> bool:
        K = set(K)
        return all(self.preds(v) <= K for v in K)

    def label(self, v: int) -> str:
        return ", ".join(str(t) for t in sorted(self.vertices[v], key=_term_key))


def _term_key(t: Term):
    return (t.token, t.endpoint != START)


def build_blueprint(statement: ExistentialStatement, rule: SynchronizationRule,
                    index: int, closure: Optional[ClosedClause] = None) -> Blueprint:
    trig = rule.trigger.token if rule.trigger else None
    if closure is None:
        closure = close_clause(statement.clause, trig)
    if not is_consistent(closure):
        raise InconsistentClauseError(rule.name, index)

    le = closure.le
    terms = sorted(closure.terms, key=_term_key)
    classes: list[frozenset[Term]] = []
    for t in terms:
        if not any(t in c for c in classes):
            classes.append(frozenset(u for u in terms if le(t, u) and le(u, t)))
    rep = [min(c, key=_term_key) for c in classes]

    def lt(i, j):   # strict preorder on classes
        return le(rep[i], rep[j]) and not le(rep[j], rep[i])

    n = len(classes)
    # topological order: fewer predecessors first, ties by representative
    order = sorted(range(n), key=lambda i: (sum(lt(j, i) for j in range(n)), _term_key(rep[i])))
    classes = [classes[i] for i in order]
    rep = [rep[i] for i in order]

    def slt(i, j):
        return closure.lt(rep[i], rep[j])

    # covering arcs, plus strict pairs that no strict step on a path implies
    arcs = set()
    for i in range(n):
        for j in range(n):
            if not lt(i, j):
                continue
            between = [w for w in range(n) if lt(i, w) and lt(w, j)]
            if not between:
                arcs.add((i, j, slt(i, j)))
            elif slt(i, j) and not any(slt(i, w) or slt(w, j) for w in between):
                arcs.add((i, j, True))

    binding = rule.binding(statement)
    vev = []
    for cls in classes:
        evs = set()
        for t in cls:
            q = binding.get(t.token)
            if q is not None:
                evs.add(Event(t.endpoint, q.variable, q.value))
        vev.append(frozenset(evs))

    # per vertex: (end event, vertex holding the matching start) for each end(a) in it
    obligations = []
    for cls in classes:
        obl = set()
        for t in cls:
            q = binding.get(t.token)
            s_term = start(t.token)
            if t.endpoint != START and q is not None and s_term in closure.terms:
                s_vertex = next(k for k, c in enumerate(classes) if s_term in c)
                obl.add((Event("end", q.variable, q.value), s_vertex))
        obligations.append(frozenset(obl))

    bp = Blueprint((rule.name, index), tuple(classes), frozenset(arcs), tuple(vev),
                   end_obligations=tuple(obligations))
    if trig is not None:
        object.__setattr__(bp, "trigger_start", bp.vertex_of(start(trig)))
        object.__setattr__(bp, "trigger_end", bp.vertex_of(end(trig)))
    return bp


def rule_blueprints(rule: SynchronizationRule) -> tuple[Blueprint, ...]:
    return tuple(build_blueprint(st, rule, i) for i, st in enumerate(rule.statements))


def snapshot_next(bp: Blueprint, K: frozenset[int]) -> frozenset[int]:
    """Largest downward closed K' with no strict arc inside K' \\ K."""
    out = set(K)
    changed = True
    while changed:
        changed = False
        for v in range(len(bp)):
            if v in out:
                continue
            if bp.preds(v) <= out and not (bp.strict_preds(v) - K):
                out.add(v)
                changed = True
    return frozenset(out)


def snapshot_next_sigma(bp: Blueprint, K: frozenset[int], events: frozenset[Event],
                        exclude: Optional[int] = None) -> frozenset[int]:
    """Largest downward closed subset of next(K) whose new vertices' events are in ``events``.

    ``exclude`` names a vertex (with everything above it) that may not be added.
    """
    allowed = snapshot_next(bp, K)
    if exclude is not None and exclude not in K:
        allowed = allowed - {exclude}
    out = set(K)
    changed = True
    while changed:
        changed = False
        for v in allowed:
            if v in out:
                continue
            if bp.preds(v) <= out and bp.vertex_events[v] <= events:
                out.add(v)
                changed = True
    return frozenset(out)


def snapshot_compatible(bp: Blueprint, K: frozenset[int], events: frozenset[Event],
                        exclude: Optional[int] = None, token_level: bool = False) -> bool:
    """No token whose start was matched may end unnoticed.

    The default compares events by (variable, value) only.  With
    ``token_level`` the check is made per token name: if ``start(a)`` is in
    ``K`` and ``end(a)`` is not, the end event of ``a``'s variable and value
    must make ``end(a)`` itself enter ``K``.
    """
    if token_level:
        return _token_compatible(bp, K, events, exclude)
    started = {(e.variable, e.value) for e in bp.events_of(K) if e.kind == "start"}
    if not started:
        return True
    pending = bp.events_of(bp.all_vertices - K)
    collected = None
    for e in events:
        if e.kind != "end" or (e.variable, e.value) not in started or e not in pending:
            continue
        if collected is None:
            collected = bp.events_of(snapshot_next_sigma(bp, K, events, exclude))
        if e not in collected:
            return False
    return True


def _token_compatible(bp, K, events, exclude) -> bool:
    nxt = None
    for v in bp.all_vertices - K:
        for ev, started_at in bp.end_obligations[v]:
            if ev in events and started_at in K:
                if nxt is None:
                    nxt = snapshot_next_sigma(bp, K, events, exclude)
                if v not in nxt:
                    return False
    return True


def evolve_snapshot(bp: Blueprint, K: frozenset[int], events: frozenset[Event],
                    exclude: Optional[int] = None,
                    token_level: bool = False) -> Optional[frozenset[int]]:
    if not snapshot_compatible(bp, K, events, exclude, token_level):
        return None
    return snapshot_next_sigma(bp, K, events, exclude)
