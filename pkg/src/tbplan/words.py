"""Alphabet symbols, events, and the plan <-> word encoding."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .model import Plan, Timeline, Token, horizon


class EncodingError(ValueError):
    def __init__(self, message: str, variable: Optional[str] = None,
                 position: Optional[int] = None):
        super().__init__(message)
        self.variable = variable
        self.position = position


@dataclass(frozen=True, order=True)
class Start:
    """``(-, value)``: the first token of a timeline begins."""
    value: str

    def __str__(self):
        return f"-/{self.value}"


@dataclass(frozen=True, order=True)
class Change:
    """``(old, new)``: a token with ``old`` ends and one with ``new`` begins."""
    old: str
    new: str

    def __str__(self):
        return f"{self.old}/{self.new}"


@dataclass(frozen=True, order=True)
class _Hold:
    def __str__(self):
        return "@"

    def __repr__(self):
        return "HOLD"


HOLD = _Hold()

Component = Union[Start, Change, _Hold]


@dataclass(frozen=True)
class Symbol:
    """One letter: a component per variable, stored sorted by variable name."""

    assignment: tuple[tuple[str, Component], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, Component]) -> "Symbol":
        return cls(tuple(sorted(mapping.items())))

    def __getitem__(self, variable: str) -> Component:
        for x, c in self.assignment:
            if x == variable:
                return c
        raise KeyError(variable)

    def variables(self) -> tuple[str, ...]:
        return tuple(x for x, _ in self.assignment)

    @property
    def is_initial(self) -> bool:
        return all(isinstance(c, Start) for _, c in self.assignment)

    @property
    def is_non_initial(self) -> bool:
        return not any(isinstance(c, Start) for _, c in self.assignment)

    def sort_key(self) -> tuple:
        return tuple((x, str(c)) for x, c in self.assignment)

    def __str__(self):
        return "{" + ", ".join(f"{x}:{c}" for x, c in self.assignment) + "}"


class Event(NamedTuple):
    kind: str
    variable: str
    value: str

    def __str__(self):
        return f"{self.kind}({self.variable},{self.value})"


Word = Sequence[Symbol]


def events(symbol: Symbol) -> frozenset[Event]:
    out = set()
    for x, c in symbol.assignment:
        if isinstance(c, Change):
            out.add(Event("end", x, c.old))
            out.add(Event("start", x, c.new))
        elif isinstance(c, Start):
            out.add(Event("start", x, c.value))
    return frozenset(out)


def terminal_events(last_values: Mapping[str, str]) -> frozenset[Event]:
    """End events for every token still open at the horizon."""
    return frozenset(Event("end", x, v) for x, v in last_values.items())


def alphabet_size(num_values: int, num_variables: int) -> int:
    return num_values ** num_variables + (num_values ** 2 + 1) ** num_variables


def check_shape(word: Word) -> None:
    for i, sym in enumerate(word):
        if i == 0 and not sym.is_initial:
            raise EncodingError("first symbol is not initial", position=0)
        if i > 0 and not sym.is_non_initial:
            raise EncodingError(f"initial component at position {i}", position=i)
        if i > 0 and sym.variables() != word[0].variables():
            raise EncodingError(f"symbol {i} ranges over different variables", position=i)


def word_to_plan(word: Word, variables: Iterable[str] = ()) -> Plan:
    """Decode a weakly-encoding word; ``variables`` only matters for the empty word."""
    if not word:
        return Plan({x: Timeline(x) for x in variables})
    check_shape(word)
    n = len(word)
    timelines = {}
    for x in word[0].variables():
        toks = []
        cur_value, cur_start = word[0][x].value, 0
        for i in range(1, n):
            c = word[i][x]
            if c is HOLD:
                continue
            if c.old != cur_value:
                raise EncodingError(
                    f"variable {x} at position {i}: ending value {c.old} "
                    f"differs from started value {cur_value}", x, i)
            toks.append(Token(x, cur_value, i - cur_start))
            cur_value, cur_start = c.new, i
        toks.append(Token(x, cur_value, n - cur_start))
        timelines[x] = Timeline(x, tuple(toks))
    return Plan(timelines)


def plan_to_word(plan: Plan) -> list[Symbol]:
    h = horizon(plan)
    if h == 0:
        return []
    cols: dict[str, list[Component]] = {}
    for x, tl in plan.timelines.items():
        col: list[Component] = [HOLD] * h
        t = 0
        prev = None
        for tok in tl.tokens:
            col[t] = Start(tok.value) if prev is None else Change(prev, tok.value)
            prev = tok.value
            t += tok.duration
        cols[x] = col
    names = sorted(cols)
    return [Symbol(tuple((x, cols[x][i]) for x in names)) for i in range(h)]


def format_word(word: Word) -> str:
    return " ".join(str(s) for s in word) if word else "<empty>"
