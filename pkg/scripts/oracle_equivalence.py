"""Compare the automaton solver with brute-force enumeration on random eager problems.

    python scripts/oracle_equivalence.py --problems 500 --horizon 6 --mode sink
    python scripts/oracle_equivalence.py --mode literal --out results.json
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import time
from dataclasses import asdict, dataclass, field

from tbplan.generators import random_eager_problem
from tbplan.model import horizon
from tbplan.oracle import brute_force_exists, verify_plan
from tbplan.rules_automaton import DEFAULT_MODE, LITERAL, SINK
from tbplan.solver import SoundnessError, solve

log = logging.getLogger("oracle_equivalence")


@dataclass
class Config:
    problems: int = 200
    first_seed: int = 0
    horizon: int = 6
    mode: str = DEFAULT_MODE
    max_vars: int = 2
    max_values: int = 3
    max_rules: int = 2
    max_statements: int = 2
    max_quantifiers: int = 2


@dataclass
class Outcome:
    seed: int
    oracle_sat: bool
    solver: str        # agree | missed | spurious | unsound | not-minimal
    oracle_seconds: float
    solver_seconds: float


@dataclass
class Summary:
    config: Config
    outcomes: list[Outcome] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for o in self.outcomes:
            out[o.solver] = out.get(o.solver, 0) + 1
        return out


def run_one(cfg: Config, seed: int) -> Outcome:
    p = random_eager_problem(random.Random(seed), cfg.max_vars, cfg.max_values, cfg.max_rules,
                             cfg.max_statements, cfg.max_quantifiers)
    t0 = time.perf_counter()
    plan = brute_force_exists(p, cfg.horizon)
    t1 = time.perf_counter()
    try:
        r = solve(p, max_len=cfg.horizon, empty_viewpoint=cfg.mode)
    except SoundnessError:
        verdict = "unsound"
    else:
        if r.sat != (plan is not None):
            verdict = "missed" if plan is not None else "spurious"
        elif r.sat and (verify_plan(r.plan, p) or horizon(r.plan) != horizon(plan)):
            verdict = "not-minimal"
        else:
            verdict = "agree"
    t2 = time.perf_counter()
    return Outcome(seed, plan is not None, verdict, t1 - t0, t2 - t1)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problems", type=int, default=Config.problems)
    ap.add_argument("--first-seed", type=int, default=Config.first_seed)
    ap.add_argument("--horizon", type=int, default=Config.horizon)
    ap.add_argument("--mode", choices=[LITERAL, SINK], default=Config.mode)
    ap.add_argument("--max-vars", type=int, default=Config.max_vars)
    ap.add_argument("--max-values", type=int, default=Config.max_values)
    ap.add_argument("--max-rules", type=int, default=Config.max_rules)
    ap.add_argument("--max-statements", type=int, default=Config.max_statements)
    ap.add_argument("--max-quantifiers", type=int, default=Config.max_quantifiers)
    ap.add_argument("--out", help="write per-seed results as JSON")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    cfg = Config(**{k: v for k, v in vars(args).items() if k in Config.__dataclass_fields__})
    summary = Summary(cfg)
    for seed in range(cfg.first_seed, cfg.first_seed + cfg.problems):
        o = run_one(cfg, seed)
        summary.outcomes.append(o)
        if o.solver != "agree":
            log.info("seed %d: %s (oracle sat=%s)", seed, o.solver, o.oracle_sat)

    oracle_t = sum(o.oracle_seconds for o in summary.outcomes)
    solver_t = sum(o.solver_seconds for o in summary.outcomes)
    print(f"mode={cfg.mode} horizon={cfg.horizon} problems={cfg.problems}")
    print(f"sat={sum(o.oracle_sat for o in summary.outcomes)} {summary.counts()}")
    print(f"oracle {oracle_t:.1f}s  solver {solver_t:.1f}s")
    bad = [o.seed for o in summary.outcomes if o.solver != "agree"]
    if bad:
        print("disagreeing seeds:", bad[:40])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "counts": summary.counts(),
                       "outcomes": [asdict(o) for o in summary.outcomes]}, fh, indent=2)
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
