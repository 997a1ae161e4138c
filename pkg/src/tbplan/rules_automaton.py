"""The DFA over viewpoints that checks synchronization rules.

A state is, per rule, a set of viewpoints; a viewpoint maps statement
indices to snapshot progress sets ``K``.  States are canonical tuples so
structural equality is state equality.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Mapping, Optional

from .blueprint import (Blueprint, evolve_snapshot, rule_blueprints,
                        snapshot_next_sigma)
from .model import PlanningProblem, SynchronizationRule
from .words import Event, Symbol, events, terminal_events

LITERAL = "literal"
SINK = "sink"
# an enabled viewpoint that loses every snapshot rejects the run
DEFAULT_MODE = SINK


class LinearityError(AssertionError):
    pass


@dataclass(frozen=True)
class Viewpoint:
    rule: int
    snapshots: tuple[tuple[int, frozenset[int]], ...]   # (statement index, K), sorted

    @classmethod
    def of(cls, rule: int, snaps: Mapping[int, frozenset[int]]) -> "Viewpoint":
        return cls(rule, tuple(sorted((i, frozenset(K)) for i, K in snaps.items())))

    def f(self) -> dict[int, frozenset[int]]:
        return dict(self.snapshots)

    def domain(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.snapshots)

    def key(self) -> tuple:
        return (self.rule, tuple((i, tuple(sorted(K))) for i, K in self.snapshots))

    def as_dict(self) -> dict:
        return {str(i): sorted(K) for i, K in self.snapshots}


@dataclass(frozen=True)
class APState:
    tag: str                                            # "live" | "sink"
    viewpoints: tuple[tuple[Viewpoint, ...], ...] = ()  # indexed by rule

    def as_dict(self) -> dict:
        if self.tag == "sink":
            return {"tag": "sink"}
        return {"tag": "live", "rules": [[v.as_dict() for v in vs] for vs in self.viewpoints]}

    def __str__(self):
        return json.dumps(self.as_dict(), sort_keys=True)


AP_SINK = APState("sink")


def vp_leq(v1: Viewpoint, v2: Viewpoint) -> bool:
    if v1.rule != v2.rule:
        raise ValueError("viewpoints of different rules are not comparable")
    f1, f2 = v1.f(), v2.f()
    if not set(f2) <= set(f1):
        return False
    return all(f1[i] <= f2[i] for i in f2)


def _chain_key(v: Viewpoint):
    return (-len(v.snapshots), sum(len(K) for _, K in v.snapshots), v.key())


def is_chain(vps: Iterable[Viewpoint]) -> bool:
    vps = list(vps)
    return all(vp_leq(a, b) or vp_leq(b, a) for i, a in enumerate(vps) for b in vps[i + 1:])


class RulesAutomaton:
    def __init__(self, problem: PlanningProblem, empty_viewpoint: str = DEFAULT_MODE,
                 check_invariants: bool = False, token_level: bool = True):
        if empty_viewpoint not in (LITERAL, SINK):
            raise ValueError(f"unknown empty-viewpoint mode {empty_viewpoint!r}")
        self.problem = problem
        self.rules: tuple[SynchronizationRule, ...] = problem.rules
        self.blueprints: tuple[tuple[Blueprint, ...], ...] = tuple(
            rule_blueprints(r) for r in self.rules)
        self.empty_viewpoint = empty_viewpoint
        self.check_invariants = check_invariants
        self.token_level = token_level
        self._evolve_cache: dict = {}

    # -- viewpoints -----------------------------------------------------------

    def vp_initial(self, r: int) -> Viewpoint:
        return Viewpoint.of(r, {i: frozenset() for i in range(len(self.blueprints[r]))})

    def vp_is_final(self, vp: Viewpoint) -> bool:
        bps = self.blueprints[vp.rule]
        return any(len(K) == len(bps[i]) for i, K in vp.snapshots)

    def vp_is_enabled(self, vp: Viewpoint) -> bool:
        if self.rules[vp.rule].triggerless:
            return True
        bps = self.blueprints[vp.rule]
        return any(bps[i].trigger_start in K for i, K in vp.snapshots)

    def _evolve_snapshot(self, r: int, i: int, K: frozenset[int], evs: frozenset[Event],
                         exclude: Optional[int] = None):
        key = (r, i, K, evs, exclude)
        if key not in self._evolve_cache:
            self._evolve_cache[key] = evolve_snapshot(self.blueprints[r][i], K, evs, exclude,
                                                           self.token_level)
        return self._evolve_cache[key]

    def vp_evolve(self, vp: Viewpoint, evs: frozenset[Event],
                  hold_trigger: bool = False) -> Viewpoint:
        """Evolve every snapshot, dropping the ones that cannot go on.

        With ``hold_trigger`` the trigger-start vertex is never collected: the
        result keeps waiting for a later trigger token.
        """
        bps = self.blueprints[vp.rule]
        out = {}
        for i, K in vp.snapshots:
            exclude = bps[i].trigger_start if hold_trigger else None
            K2 = self._evolve_snapshot(vp.rule, i, K, evs, exclude)
            if K2 is None:
                K2 = self._relax(vp.rule, i, K, evs, exclude)
            if K2 is not None:
                out[i] = K2
        return Viewpoint.of(vp.rule, out)

    def _relax(self, r, i, K, evs, exclude):
        """Retreat from a greedy match that turned out incompatible.

        Tries the largest sub-snapshots of ``K`` first.  Matched vertices may
        be given up, but never the trigger start, and never the end of a token
        whose start stays matched (that token is gone and cannot end again).
        """
        for K1 in self._retreats(r, i, K):
            K2 = self._evolve_snapshot(r, i, K1, evs, exclude)
            if K2 is not None:
                return K2
        return None

    def _retreats(self, r, i, K):
        key = ("retreat", r, i, K)
        if key not in self._evolve_cache:
            bp = self.blueprints[r][i]
            keep = {bp.trigger_start} & K
            ks = sorted(K)
            cands = []
            for mask in range(2 ** len(ks) - 1):
                K1 = frozenset(v for j, v in enumerate(ks) if mask >> j & 1)
                if not keep <= K1 or not bp.is_downward_closed(K1):
                    continue
                if any(s in K1 and v in K and v not in K1
                       for v in range(len(bp)) for _, s in bp.end_obligations[v]):
                    continue
                cands.append(K1)
            cands.sort(key=lambda k: (-len(k), sorted(k)))
            self._evolve_cache[key] = cands
        return self._evolve_cache[key]

    def _anchor(self, vp: Viewpoint) -> Viewpoint:
        """Keep only snapshots that matched the trigger start.

        A snapshot that missed ``start(a0)`` when the trigger fired can only
        ever match a later trigger token, so it cannot witness this one.
        """
        bps = self.blueprints[vp.rule]
        return Viewpoint(vp.rule, tuple((i, K) for i, K in vp.snapshots
                                        if bps[i].trigger_start in K))

    def sigma_enables(self, vp: Viewpoint, evs: frozenset[Event]) -> bool:
        """Some snapshot would collect ``start(a0)`` on reading ``evs``.

        Only meaningful for viewpoints of rules with a trigger.  A viewpoint
        that is already enabled keeps its trigger; it is not enabled anew.
        """
        rule = self.rules[vp.rule]
        if rule.triggerless:
            raise ValueError(f"rule {rule.name} has no trigger")
        if self.vp_is_enabled(vp):
            return False
        bps = self.blueprints[vp.rule]
        return any(bps[i].trigger_start in snapshot_next_sigma(bps[i], K, evs)
                   for i, K in vp.snapshots)

    # -- states ---------------------------------------------------------------

    def initial(self) -> APState:
        return APState("live", tuple((self.vp_initial(r),) for r in range(len(self.rules))))

    def state_compatible(self, state: APState, evs: frozenset[Event]) -> bool:
        for r, rule in enumerate(self.rules):
            trig = rule.trigger
            if trig is None or Event("start", trig.variable, trig.value) not in evs:
                continue
            if not any(self.sigma_enables(vp, evs) for vp in state.viewpoints[r]):
                return False
        return True

    def step_events(self, state: APState, evs: frozenset[Event]) -> APState:
        if state.tag == "sink" or not self.state_compatible(state, evs):
            return AP_SINK
        new = []
        for r, rule in enumerate(self.rules):
            out = set()
            for vp in state.viewpoints[r]:
                if rule.triggerless:
                    nxt = self.vp_evolve(vp, evs)
                    if self.empty_viewpoint == SINK and not nxt.snapshots:
                        return AP_SINK
                    out.add(nxt)
                    continue
                if self.vp_is_enabled(vp):
                    nxt = self.vp_evolve(vp, evs)
                    if self.empty_viewpoint == SINK and not self.vp_is_enabled(nxt):
                        return AP_SINK
                    out.add(nxt)
                    continue
                # waiting for a trigger: keep waiting, and fork when one starts now
                out.add(self.vp_evolve(vp, evs, hold_trigger=True))
                if self.sigma_enables(vp, evs):
                    nxt = self._anchor(self.vp_evolve(vp, evs))
                    if self.empty_viewpoint == SINK and not self.vp_is_enabled(nxt):
                        return AP_SINK
                    out.add(nxt)
            if rule.trigger is not None:
                # a satisfied trigger imposes nothing more
                out = {v for v in out if not (self.vp_is_enabled(v) and self.vp_is_final(v))}
            new.append(self._canonical(out))
        q = APState("live", tuple(new))
        if self.check_invariants:
            self.assert_invariants(q, state)
        return q

    def step(self, state: APState, symbol: Symbol) -> APState:
        return self.step_events(state, events(symbol))

    def _canonical(self, vps) -> tuple[Viewpoint, ...]:
        return tuple(sorted(vps, key=_chain_key))

    def is_final(self, state: APState, last_values: Mapping[str, str] = None) -> bool:
        """Final after closing every token still open at the horizon."""
        if state.tag == "sink":
            return False
        q = self.step_events(state, terminal_events(last_values or {}))
        if q.tag == "sink":
            return False
        return all(self.vp_is_final(vp)
                   for vps in q.viewpoints for vp in vps if self.vp_is_enabled(vp))

    def is_final_plain(self, state: APState) -> bool:
        """Finality without the terminal closure."""
        return state.tag == "live" and all(
            self.vp_is_final(vp) for vps in state.viewpoints for vp in vps
            if self.vp_is_enabled(vp))

    # -- invariants -----------------------------------------------------------

    def chain_bound(self, r: int) -> int:
        return 1 + sum(len(bp) for bp in self.blueprints[r])

    def assert_invariants(self, state: APState, previous: Optional[APState] = None) -> None:
        if state.tag == "sink":
            return
        for r, vps in enumerate(state.viewpoints):
            if not vps:
                raise LinearityError(f"rule {self.rules[r].name} has no viewpoint")
            if not is_chain(vps):
                raise LinearityError(
                    f"rule {self.rules[r].name}: viewpoints not linearly ordered: "
                    + "; ".join(json.dumps(v.as_dict()) for v in vps))
            if len(vps) > self.chain_bound(r):
                raise LinearityError(f"rule {self.rules[r].name}: {len(vps)} viewpoints")
            for vp in vps:
                for i, K in vp.snapshots:
                    if not self.blueprints[r][i].is_downward_closed(K):
                        raise LinearityError(f"K={sorted(K)} not downward closed")

    def ordered(self, vps) -> list[Viewpoint]:
        def cmp(a, b):
            if a == b:
                return 0
            return -1 if vp_leq(a, b) else 1
        return sorted(vps, key=cmp_to_key(cmp))
