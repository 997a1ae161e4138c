import random

import pytest
from hypothesis import given, strategies as st

from tbplan.generators import random_plan, random_variables
from tbplan.model import Plan
from tbplan.structure import StructureAutomaton
from tbplan.words import (HOLD, Change, EncodingError, Event, Start, Symbol, alphabet_size,
                          events, format_word, plan_to_word, terminal_events, word_to_plan)


def test_small_plan_encoding():
    plan = Plan.from_lists({"x": [("a", 2), ("b", 1)], "y": [("c", 3)]})
    word = plan_to_word(plan)
    assert word == [Symbol.of({"x": Start("a"), "y": Start("c")}),
                    Symbol.of({"x": HOLD, "y": HOLD}),
                    Symbol.of({"x": Change("a", "b"), "y": HOLD})]
    assert word_to_plan(word) == plan


def test_empty_plan_is_empty_word():
    assert plan_to_word(Plan.from_lists({"x": []})) == []
    assert word_to_plan([], ["x"]) == Plan.from_lists({"x": []})


def test_events():
    sym = Symbol.of({"x": Change("a", "b"), "y": HOLD, "z": Start("c")})
    assert events(sym) == {Event("end", "x", "a"), Event("start", "x", "b"),
                           Event("start", "z", "c")}
    assert terminal_events({"x": "b"}) == {Event("end", "x", "b")}


def test_non_weakly_encoding_word_is_rejected():
    word = [Symbol.of({"x": Start("a")}), Symbol.of({"x": Change("b", "a")})]
    with pytest.raises(EncodingError) as e:
        word_to_plan(word)
    assert e.value.variable == "x" and e.value.position == 1


@pytest.mark.parametrize("word", [
    [Symbol.of({"x": HOLD})],
    [Symbol.of({"x": Start("a")}), Symbol.of({"x": Start("a")})],
    [Symbol.of({"x": Start("a")}), Symbol.of({"y": HOLD})],
])
def test_bad_shapes(word):
    with pytest.raises(EncodingError):
        word_to_plan(word)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_alphabet_size_matches_enumeration(n, m):
    from tbplan.model import StateVariable
    vals = {f"v{i}" for i in range(n)}
    tsv = StructureAutomaton([StateVariable(f"x{j}", vals, {}) for j in range(m)])
    assert len(tsv.all_symbols()) == alphabet_size(n, m)


def test_format_word():
    assert format_word([]) == "<empty>"
    assert format_word([Symbol.of({"x": Start("a")})]) == "{x:-/a}"


@given(st.integers(0, 10**6), st.integers(0, 8))
def test_plan_round_trip(seed, h):
    rng = random.Random(seed)
    vs = random_variables(rng, 3)
    plan = random_plan(rng, vs, h)
    assert word_to_plan(plan_to_word(plan), [x.name for x in vs]) == plan


@given(st.integers(0, 10**6), st.integers(1, 8))
def test_word_round_trip(seed, n):
    rng = random.Random(seed)
    tsv = StructureAutomaton(random_variables(rng, 3))
    q, word = tsv.initial(), []
    for _ in range(n):
        syms = tsv.successor_symbols(q)
        if not syms:
            break
        s = rng.choice(syms)
        word.append(s)
        q = tsv.step(q, s)
    assert plan_to_word(word_to_plan(word)) == word
