"""Command-line front end: ``tbplan check|solve|verify|allen``.

Exit codes: 0 success/sat, 1 unsat-proved (or plan violates rules),
2 unsat-bounded, 3 invalid or non-eager problem, 4 parse/schema error,
5 internal soundness failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import allen
from .dsl import ParseError, parse_file
from .eager import InconsistentClauseError, check_eager_problem
from .export import PlanSchemaError, export_dot, plan_to_json, read_plan, write_plan
from .model import MalformedPlanError, horizon, normalize_problem, validate_problem
from .oracle import PlanMismatchError, brute_force_exists, verify_plan
from .rules_automaton import DEFAULT_MODE, LITERAL, SINK
from .solver import (SAT, UNSAT_BOUNDED, UNSAT_PROVED, InvalidProblemError,
                     NonEagerProblemError, SoundnessError, solve)
from .words import format_word

EXIT_OK = 0
EXIT_UNSAT_PROVED = 1
EXIT_UNSAT_BOUNDED = 2
EXIT_INVALID = 3
EXIT_PARSE = 4
EXIT_SOUNDNESS = 5

SCHEMA = 1
STATUS_EXIT = {SAT: EXIT_OK, UNSAT_PROVED: EXIT_UNSAT_PROVED, UNSAT_BOUNDED: EXIT_UNSAT_BOUNDED}


def _emit(report: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps({"schema": SCHEMA, **report}, indent=2, sort_keys=True) + "\n")


def _load(path, command):
    """Parse ``path``; on failure emit the diagnostics and return None."""
    try:
        return parse_file(path)
    except ParseError as e:
        _emit({"command": command, "status": "parse-error",
               "diagnostics": [d.as_dict() for d in e.diagnostics]})
    except OSError as e:
        _emit({"command": command, "status": "parse-error",
               "diagnostics": [{"message": str(e), "severity": "error"}]})
    return None


def cmd_check(args) -> int:
    problem = _load(args.file, "check")
    if problem is None:
        return EXIT_PARSE
    problem = normalize_problem(problem)
    bad = validate_problem(problem)
    if bad:
        _emit({"command": "check", "status": "invalid", "violations": [v.as_dict() for v in bad]})
        return EXIT_INVALID
    try:
        report = check_eager_problem(problem)
    except InconsistentClauseError as e:
        _emit({"command": "check", "status": "inconsistent", "rule": e.rule,
               "statement": e.statement})
        return EXIT_INVALID
    _emit({"command": "check", "status": "eager" if report.eager else "non-eager",
           **report.as_dict()})
    return EXIT_OK if report.eager else EXIT_INVALID


def _oracle_agrees(result, problem, h: int, max_len: int) -> tuple[bool, dict]:
    plan = brute_force_exists(problem, h)
    info = {"horizon": h, "sat": plan is not None}
    if plan is not None:
        info["min_horizon"] = horizon(plan)
    if result.status == SAT:
        n = len(result.word)
        if n <= h:
            return plan is not None and horizon(plan) == n, info
        return plan is None, info
    if result.status == UNSAT_PROVED or max_len >= h:
        return plan is None, info
    # bounded search below the oracle horizon: only the bounded part is comparable
    return plan is None or horizon(plan) > max_len, info


def cmd_solve(args) -> int:
    problem = _load(args.file, "solve")
    if problem is None:
        return EXIT_PARSE
    try:
        result = solve(problem, max_len=args.max_len, empty_viewpoint=args.empty_viewpoint,
                       jobs=args.jobs)
    except InvalidProblemError as e:
        _emit({"command": "solve", "status": "invalid",
               "violations": [v.as_dict() for v in e.violations]})
        return EXIT_INVALID
    except NonEagerProblemError as e:
        _emit({"command": "solve", "status": "non-eager", **e.report.as_dict()})
        return EXIT_INVALID
    except InconsistentClauseError as e:
        _emit({"command": "solve", "status": "inconsistent", "rule": e.rule,
               "statement": e.statement})
        return EXIT_INVALID
    except SoundnessError as e:
        _emit({"command": "solve", "status": "soundness-error", "word": format_word(e.word),
               "plan": plan_to_json(e.plan), "failures": [f.as_dict() for f in e.failures]})
        return EXIT_SOUNDNESS

    report = {"command": "solve", "empty_viewpoint": args.empty_viewpoint,
              "max_len": args.max_len, **result.as_dict()}
    if result.plan is not None:
        report["plan"] = plan_to_json(result.plan)
        if args.emit_plan:
            write_plan(result.plan, args.emit_plan)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(export_dot(normalize_problem(problem), args.dot_target,
                                max_len=args.dot_depth, empty_viewpoint=args.empty_viewpoint))
    code = STATUS_EXIT[result.status]
    if args.oracle_horizon is not None:
        ok, info = _oracle_agrees(result, normalize_problem(problem), args.oracle_horizon,
                                  args.max_len)
        report["oracle"] = {**info, "agrees": ok}
        if not ok:
            code = EXIT_SOUNDNESS
    _emit(report)
    return code


def cmd_verify(args) -> int:
    problem = _load(args.file, "verify")
    if problem is None:
        return EXIT_PARSE
    try:
        plan = read_plan(args.plan)
        failures = verify_plan(plan, problem)
    except (PlanSchemaError, PlanMismatchError, MalformedPlanError, OSError) as e:
        _emit({"command": "verify", "status": "schema-error", "message": str(e)})
        return EXIT_PARSE
    _emit({"command": "verify", "status": "valid" if not failures else "violated",
           "failures": [f.as_dict() for f in failures]})
    return EXIT_OK if not failures else EXIT_UNSAT_PROVED


def cmd_allen(args) -> int:
    rows = allen.table()
    if args.json:
        _emit({"command": "allen", "table": [r.as_dict() for r in rows]})
    else:
        for r in rows:
            print(r)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tbplan", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate and eager-check a .tbp file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="search for a shortest solution plan")
    p.add_argument("file")
    p.add_argument("--max-len", type=int, default=64)
    p.add_argument("--oracle-horizon", type=int, default=None,
                   help="cross-check with brute-force enumeration up to this horizon")
    p.add_argument("--emit-plan", metavar="PATH")
    p.add_argument("--dot", metavar="PATH")
    p.add_argument("--dot-target", choices=["tsv", "ap", "product", "blueprints"],
                   default="product")
    p.add_argument("--dot-depth", type=int, default=8)
    p.add_argument("--empty-viewpoint", choices=[LITERAL, SINK], default=DEFAULT_MODE)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a plan JSON file against a problem")
    p.add_argument("file")
    p.add_argument("--plan", required=True, metavar="PATH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("allen", help="print the eagerness table of Allen's relations")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_allen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
