"""Plan JSON and GraphViz output."""
from __future__ import annotations

import json
from collections import deque
from typing import Optional

from .model import Plan, PlanningProblem, Timeline, Token, horizon
from .rules_automaton import DEFAULT_MODE, RulesAutomaton
from .solver import Product
from .structure import StructureAutomaton
from .words import events
from .blueprint import rule_blueprints

PLAN_KEYS = {"horizon", "timelines", "schema"}


class PlanSchemaError(ValueError):
    pass


def plan_to_json(plan: Plan) -> dict:
    return {"horizon": horizon(plan),
            "timelines": {x: [{"value": t.value, "duration": t.duration} for t in tl.tokens]
                          for x, tl in sorted(plan.timelines.items())}}


def plan_from_json(data) -> Plan:
    if not isinstance(data, dict) or not {"horizon", "timelines"} <= set(data) \
            or set(data) - PLAN_KEYS:
        raise PlanSchemaError("plan must be an object with keys 'horizon' and 'timelines'")
    h, tls = data["horizon"], data["timelines"]
    if not isinstance(h, int) or isinstance(h, bool) or h < 0:
        raise PlanSchemaError("'horizon' must be a non-negative integer")
    if not isinstance(tls, dict):
        raise PlanSchemaError("'timelines' must be an object")
    out = {}
    for x, toks in tls.items():
        if not isinstance(toks, list):
            raise PlanSchemaError(f"timeline {x} must be a list")
        seq = []
        for i, t in enumerate(toks):
            if not isinstance(t, dict) or set(t) != {"value", "duration"}:
                raise PlanSchemaError(f"{x}[{i}]: token needs exactly 'value' and 'duration'")
            d = t["duration"]
            if not isinstance(t["value"], str) or not isinstance(d, int) \
                    or isinstance(d, bool) or d < 1:
                raise PlanSchemaError(f"{x}[{i}]: bad value or duration")
            seq.append(Token(x, t["value"], d))
        out[x] = Timeline(x, tuple(seq))
    plan = Plan(out)
    if any(tl.horizon() != h for tl in plan.timelines.values()):
        raise PlanSchemaError(f"timeline lengths disagree with horizon {h}")
    return plan


def read_plan(path) -> Plan:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise PlanSchemaError(f"not JSON: {e}") from None
    return plan_from_json(data)


def write_plan(plan: Plan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan_to_json(plan), fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- DOT ----------------------------------------------------------------------

def _q(s) -> str:
    return json.dumps(str(s))


def _reach(initial, successors, max_len: Optional[int]):
    ids = {initial: 0}
    edges = []
    depth = {initial: 0}
    todo = deque([initial])
    while todo:
        q = todo.popleft()
        if max_len is not None and depth[q] >= max_len:
            continue
        for label, nq in successors(q):
            if nq not in ids:
                ids[nq] = len(ids)
                depth[nq] = depth[q] + 1
                todo.append(nq)
            edges.append((ids[q], ids[nq], label))
    return ids, edges


def _graph(name, ids, edges, node_label, final) -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=box, fontsize=10];"]
    for q, i in ids.items():
        shape = ", peripheries=2" if final(q) else ""
        lines.append(f"  n{i} [label={_q(node_label(q))}{shape}];")
    for a, b, label in edges:
        lines.append(f"  n{a} -> n{b} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def blueprints_dot(problem: PlanningProblem) -> str:
    lines = ["digraph blueprints {", "  rankdir=LR;", "  node [shape=ellipse, fontsize=10];"]
    for rule in problem.rules:
        for i, bp in enumerate(rule_blueprints(rule)):
            cid = f"{rule.name}_{i}"
            lines.append(f"  subgraph cluster_{cid} {{")
            lines.append(f"    label={_q(f'{rule.name} / statement {i}')};")
            for v in range(len(bp)):
                lines.append(f"    {cid}_v{v} [label={_q(bp.label(v))}];")
            for u, v, s in sorted(bp.arcs):
                style = " [arrowhead=normalnormal]" if s else ""
                lines.append(f"    {cid}_v{u} -> {cid}_v{v}{style};")
            lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(problem: PlanningProblem, target: str, max_len: Optional[int] = 8,
               empty_viewpoint: str = DEFAULT_MODE) -> str:
    """DOT text of the reachable fragment of ``target`` (tsv, ap, product or blueprints).

    Exploration stops at ``max_len`` symbols; sink states are drawn once.
    """
    if target == "blueprints":
        return blueprints_dot(problem)
    if target == "tsv":
        tsv = StructureAutomaton(problem.variables)
        ids, edges = _reach(tsv.initial(), lambda q: [(str(s), tsv.step(q, s))
                                                      for s in tsv.successor_symbols(q)], max_len)
        return _graph("tsv", ids, edges, str, tsv.is_final)
    if target == "product":
        prod = Product(problem, empty_viewpoint)
        sink = "sink"

        def succ(q):
            if q == sink:
                return []
            return [(str(s), sink if prod.is_dead(nq) else nq) for s, nq in prod.successors(q)]

        ids, edges = _reach(prod.initial(), succ, max_len)
        ids.setdefault(sink, len(ids))

        def label(q):
            return q if q == sink else f"{q.t}\n{q.a}"
        return _graph("product", ids, edges, label,
                      lambda q: q != sink and prod.is_final(q))
    if target == "ap":
        # the rules automaton reads events only: explore the product and project onto its states
        prod = Product(problem, empty_viewpoint)
        ap: RulesAutomaton = prod.ap
        pids, pedges = _reach(prod.initial(),
                              lambda q: [] if prod.is_dead(q) else
                              [(s, nq) for s, nq in prod.successors(q)], max_len)
        back = {i: q for q, i in pids.items()}
        ids: dict = {}
        for q in pids:
            ids.setdefault(q.a, len(ids))
        edges = sorted({(ids[back[i].a], ids[back[j].a], _events_label(sym))
                        for i, j, sym in pedges})
        return _graph("ap", ids, edges, str, lambda a: a.tag != "sink" and ap.is_final_plain(a))
    raise ValueError(f"unknown DOT target {target!r}")


def _events_label(sym) -> str:
    return "{" + ", ".join(sorted(str(e) for e in events(sym))) + "}"
