"""DFA accepting exactly the words that encode plans over a set of state variables.

Live states are stored as the Hold-free symbol they stand for; the full state
space is never materialized.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

from .model import StateVariable
from .words import HOLD, Change, Start, Symbol


@dataclass(frozen=True)
class TState:
    tag: str                      # "initial" | "sink" | "live"
    symbol: Optional[Symbol] = None

    @property
    def is_live(self) -> bool:
        return self.tag == "live"

    def current_values(self) -> dict[str, str]:
        assert self.symbol is not None
        out = {}
        for x, c in self.symbol.assignment:
            out[x] = c.value if isinstance(c, Start) else c.new
        return out

    def pairs(self) -> dict[str, tuple[Optional[str], str]]:
        assert self.symbol is not None
        return {x: ((None, c.value) if isinstance(c, Start) else (c.old, c.new))
                for x, c in self.symbol.assignment}

    def __str__(self):
        return self.tag if self.symbol is None else str(self.symbol)


T_INITIAL = TState("initial")
T_SINK = TState("sink")


class StructureAutomaton:
    def __init__(self, variables: Iterable[StateVariable]):
        self.variables = {x.name: x for x in variables}
        self.names = tuple(sorted(self.variables))

    def initial(self) -> TState:
        return T_INITIAL

    def compatible(self, state: TState, symbol: Symbol) -> bool:
        if symbol.variables() != self.names:
            return False
        if state.tag == "initial":
            return all(isinstance(c, Start) and c.value in self.variables[x].values
                       for x, c in symbol.assignment)
        if state.tag != "live":
            return False
        cur = state.current_values()
        for x, c in symbol.assignment:
            if c is HOLD:
                continue
            if not isinstance(c, Change) or c.old != cur[x]:
                return False
            var = self.variables[x]
            if c.new not in var.successors(c.old) or c.new not in var.values:
                return False
        return True

    def step(self, state: TState, symbol: Symbol) -> TState:
        if state.tag == "sink" or not self.compatible(state, symbol):
            return T_SINK
        if state.tag == "initial":
            return TState("live", symbol)
        prev = dict(state.symbol.assignment)
        merged = tuple((x, prev[x] if c is HOLD else c) for x, c in symbol.assignment)
        return TState("live", Symbol(merged))

    def is_final(self, state: TState) -> bool:
        return state.tag != "sink"

    def run(self, word) -> TState:
        q = self.initial()
        for sym in word:
            q = self.step(q, sym)
        return q

    def accepts(self, word) -> bool:
        return self.is_final(self.run(word))

    def successor_symbols(self, state: TState) -> list[Symbol]:
        """Every symbol compatible with ``state``, in a fixed order."""
        if state.tag == "initial":
            choices = [[Start(v) for v in sorted(self.variables[x].values)]
                       for x in self.names]
        elif state.tag == "live":
            cur = state.current_values()
            choices = [[HOLD] + [Change(cur[x], w)
                                 for w in sorted(self.variables[x].successors(cur[x])
                                                 & self.variables[x].values)]
                       for x in self.names]
        else:
            return []
        return [Symbol(tuple(zip(self.names, combo))) for combo in product(*choices)]

    def all_symbols(self) -> list[Symbol]:
        """The whole alphabet over the union of all values (small problems only)."""
        values = sorted(set().union(*(x.values for x in self.variables.values())))
        comps = [Start(v) for v in values]
        init = [Symbol(tuple(zip(self.names, combo)))
                for combo in product(comps, repeat=len(self.names))]
        comps = [HOLD] + [Change(v, w) for v in values for w in values]
        non = [Symbol(tuple(zip(self.names, combo)))
               for combo in product(comps, repeat=len(self.names))]
        return init + non
