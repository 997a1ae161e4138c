"""Explore random eager problems with the rules automaton's invariant checks switched on.

Reports every seed where the viewpoints of a rule stop forming a chain or
exceed the per-rule bound.

    python scripts/invariant_stress.py --problems 600 --max-vars 3 --max-rules 3 --depth 4
"""
from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass

from tbplan.generators import random_eager_problem
from tbplan.model import normalize_problem
from tbplan.rules_automaton import DEFAULT_MODE, LITERAL, SINK, LinearityError
from tbplan.solver import Product, explore


@dataclass
class Config:
    problems: int = 200
    first_seed: int = 0
    depth: int = 6
    mode: str = DEFAULT_MODE
    max_vars: int = 2
    max_values: int = 3
    max_rules: int = 2
    max_statements: int = 2
    max_quantifiers: int = 2


def check(cfg: Config, seed: int):
    p = random_eager_problem(random.Random(seed), cfg.max_vars, cfg.max_values, cfg.max_rules,
                             cfg.max_statements, cfg.max_quantifiers)
    prod = Product(normalize_problem(p), cfg.mode, check_invariants=True)
    try:
        parents, _, _, _ = explore(prod, cfg.depth, stop_at_final=False)
    except LinearityError as e:
        return None, str(e)
    return len(parents), None


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in Config.__dataclass_fields__.values():
        if f.name == "mode":
            ap.add_argument("--mode", choices=[LITERAL, SINK], default=f.default)
        else:
            ap.add_argument("--" + f.name.replace("_", "-"), type=int, default=f.default)
    args = ap.parse_args(argv)
    cfg = Config(**vars(args))

    t0 = time.perf_counter()
    states, bad = 0, []
    for seed in range(cfg.first_seed, cfg.first_seed + cfg.problems):
        n, err = check(cfg, seed)
        if err:
            bad.append((seed, err))
        else:
            states += n
    print(f"{cfg.problems} problems, {states} product states, {len(bad)} violations "
          f"({time.perf_counter() - t0:.1f}s)")
    for seed, err in bad[:10]:
        print(f"  seed {seed}: {err[:200]}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
