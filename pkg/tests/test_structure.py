import random
from itertools import product

from hypothesis import given, strategies as st

from tbplan.generators import random_variables
from tbplan.model import StateVariable
from tbplan.oracle import verify_plan
from tbplan.model import PlanningProblem
from tbplan.structure import T_SINK, StructureAutomaton
from tbplan.words import HOLD, Change, EncodingError, Start, Symbol, plan_to_word, word_to_plan

X = StateVariable("x", {"v0", "v1"}, {"v0": {"v1"}, "v1": {"v0", "v1"}})
Y = StateVariable("y", {"v0", "v1"}, {"v0": {"v0"}, "v1": set()})


def _complies(word, variables):
    try:
        plan = word_to_plan(list(word), tuple(x.name for x in variables))
    except EncodingError:
        return False
    for x in variables:
        toks = plan.timelines[x.name].tokens
        if any(t.value not in x.values for t in toks):
            return False
        if any(b.value not in x.successors(a.value) for a, b in zip(toks, toks[1:])):
            return False
    return True


def test_exhaustive_small_language():
    tsv = StructureAutomaton([X, Y])
    alphabet = tsv.all_symbols()
    for n in range(4):
        for word in product(alphabet, repeat=n):
            assert tsv.accepts(word) == _complies(word, [X, Y])


def test_empty_word_accepted():
    assert StructureAutomaton([X]).accepts([])


def test_bad_first_symbol_sinks():
    tsv = StructureAutomaton([X])
    assert tsv.step(tsv.initial(), Symbol.of({"x": HOLD})) == T_SINK
    assert tsv.step(tsv.initial(), Symbol.of({"x": Start("zz")})) == T_SINK


def test_forbidden_transition_sinks():
    tsv = StructureAutomaton([Y])
    q = tsv.step(tsv.initial(), Symbol.of({"y": Start("v1")}))
    assert q.is_live
    assert tsv.step(q, Symbol.of({"y": Change("v1", "v0")})) == T_SINK
    assert tsv.step(q, Symbol.of({"y": HOLD})) == q


def test_successor_symbols_are_exactly_the_compatible_ones():
    tsv = StructureAutomaton([X, Y])
    frontier = [tsv.initial()]
    seen = set(frontier)
    while frontier:
        q = frontier.pop()
        succ = set(tsv.successor_symbols(q))
        assert succ == {s for s in tsv.all_symbols() if tsv.compatible(q, s)}
        for s in succ:
            nq = tsv.step(q, s)
            if nq not in seen:
                seen.add(nq)
                frontier.append(nq)


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_words_of_generated_plans_accepted(seed, h):
    from tbplan.generators import random_plan
    rng = random.Random(seed)
    vs = random_variables(rng, 3)
    plan = random_plan(rng, vs, h)
    tsv = StructureAutomaton(vs)
    assert tsv.accepts(plan_to_word(plan)) == _complies(plan_to_word(plan), vs)
    assert verify_plan(plan, PlanningProblem(tuple(vs), ())) == []
