"""Lazy product of the structure and rules automata; BFS emptiness check."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .eager import EagerReport, check_eager_problem
from .model import Plan, PlanningProblem, normalize_problem, validate_problem
from .oracle import verify_plan
from .rules_automaton import DEFAULT_MODE, APState, RulesAutomaton
from .structure import StructureAutomaton, TState
from .words import Symbol, format_word, word_to_plan

log = logging.getLogger(__name__)

SAT = "sat"
UNSAT_BOUNDED = "unsat-bounded"
UNSAT_PROVED = "unsat-proved"


class NonEagerProblemError(ValueError):
    def __init__(self, report: EagerReport):
        super().__init__(f"problem is not eager: {len(report.violations)} violation(s)")
        self.report = report


class InvalidProblemError(ValueError):
    def __init__(self, violations):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = violations


class SoundnessError(RuntimeError):
    def __init__(self, word, plan, failures):
        super().__init__(f"witness {format_word(word)} is not a solution: {failures}")
        self.word = word
        self.plan = plan
        self.failures = failures


@dataclass(frozen=True)
class ProductState:
    t: TState
    a: APState


@dataclass
class SolveResult:
    status: str
    word: Optional[list[Symbol]] = None
    plan: Optional[Plan] = None
    explored: int = 0
    depth: int = 0
    t_states: int = 0
    a_states: int = 0

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def as_dict(self) -> dict:
        out = {"status": self.status, "explored": self.explored, "depth": self.depth,
               "t_states": self.t_states, "a_states": self.a_states}
        if self.plan is not None:
            out["horizon"] = len(self.word)
            out["word"] = format_word(self.word)
        return out


class Product:
    """Both automata over one problem, stepped in lockstep."""

    def __init__(self, problem: PlanningProblem, empty_viewpoint: str = DEFAULT_MODE,
                 check_invariants: bool = False):
        self.problem = problem
        self.tsv = StructureAutomaton(problem.variables)
        self.ap = RulesAutomaton(problem, empty_viewpoint, check_invariants)
        self.check_invariants = check_invariants

    def initial(self) -> ProductState:
        return ProductState(self.tsv.initial(), self.ap.initial())

    def step(self, q: ProductState, symbol: Symbol) -> ProductState:
        return ProductState(self.tsv.step(q.t, symbol), self.ap.step(q.a, symbol))

    def is_final(self, q: ProductState) -> bool:
        if not self.tsv.is_final(q.t):
            return False
        last = q.t.current_values() if q.t.is_live else {}
        return self.ap.is_final(q.a, last)

    def is_dead(self, q: ProductState) -> bool:
        return q.t.tag == "sink" or q.a.tag == "sink"

    def run(self, word) -> ProductState:
        q = self.initial()
        for s in word:
            q = self.step(q, s)
        return q

    def accepts(self, word) -> bool:
        return self.is_final(self.run(word))

    def successors(self, q: ProductState):
        for sym in self.tsv.successor_symbols(q.t):
            yield sym, self.step(q, sym)


def prepare(problem: PlanningProblem) -> PlanningProblem:
    """Normalize, validate and eager-check; raise on any failure."""
    problem = normalize_problem(problem)
    bad = validate_problem(problem)
    if bad:
        raise InvalidProblemError(bad)
    report = check_eager_problem(problem)
    if not report.eager:
        raise NonEagerProblemError(report)
    return problem


def explore(product: Product, max_len: Optional[int] = None, stop_at_final: bool = True,
            jobs: int = 1):
    """Layered BFS from the initial product state.

    Returns ``(parents, depth, accepting, truncated)`` where ``parents`` maps
    each reached live state to ``(predecessor, symbol)``.  The initial state is
    never reported as accepting: witnesses have length at least one.  With
    ``jobs > 1`` each layer is expanded by a thread pool; the merge runs in
    layer order so the result does not depend on the schedule.
    """
    q0 = product.initial()
    parents: dict[ProductState, Optional[tuple[ProductState, Symbol]]] = {q0: None}
    depth = {q0: 0}
    layer = [q0]
    truncated = False
    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None

    def expand(q):
        return [(sym, nq) for sym, nq in product.successors(q) if not product.is_dead(nq)]

    try:
        d = 0
        while layer:
            if max_len is not None and d >= max_len:
                truncated = any(nq not in parents for q in layer for _, nq in expand(q))
                break
            succs = pool.map(expand, layer) if pool else map(expand, layer)
            nxt = []
            for q, out in zip(layer, succs):
                for sym, nq in out:
                    if nq in parents:
                        continue
                    parents[nq] = (q, sym)
                    depth[nq] = d + 1
                    nxt.append(nq)
            if stop_at_final:
                for nq in nxt:
                    if product.is_final(nq):
                        return parents, depth, nq, truncated
            layer = nxt
            d += 1
    finally:
        if pool:
            pool.shutdown()
    return parents, depth, None, truncated


def reconstruct(parents, q) -> list[Symbol]:
    word = []
    while parents[q] is not None:
        q, sym = parents[q]
        word.append(sym)
    word.reverse()
    return word


def solve(problem: PlanningProblem, max_len: int = 64, empty_viewpoint: str = DEFAULT_MODE,
          check_invariants: bool = False, verify: bool = True, jobs: int = 1) -> SolveResult:
    problem = prepare(problem)
    product = Product(problem, empty_viewpoint, check_invariants)
    parents, depth, final, truncated = explore(product, max_len, jobs=jobs)
    t_states = len({q.t for q in parents})
    a_states = len({q.a for q in parents})
    if final is None:
        status = UNSAT_BOUNDED if truncated else UNSAT_PROVED
        return SolveResult(status, explored=len(parents), depth=max(depth.values()),
                           t_states=t_states, a_states=a_states)
    word = reconstruct(parents, final)
    plan = word_to_plan(word)
    if verify:
        failures = verify_plan(plan, problem)
        if failures:
            raise SoundnessError(word, plan, failures)
    log.debug("witness %s after %d states", format_word(word), len(parents))
    return SolveResult(SAT, word, plan, explored=len(parents), depth=len(word),
                       t_states=t_states, a_states=a_states)


def accepts_empty_word(problem: PlanningProblem, empty_viewpoint: str = DEFAULT_MODE) -> bool:
    product = Product(prepare(problem), empty_viewpoint)
    return product.is_final(product.initial())
