#!/usr/bin/env python3
"""Stress benchmark: five entangled spherical shells at a 326-point scale.

Shell spacing is mean*stdev = 0.044 while radial noise has scale 0.147,
so the shells overlap heavily and the smallest class (6 points) has no
same-class near neighbors at this scale — every classifier is expected
to score minority F1 = 0 here.  The script exists to make that negative
result reproducible and to let the shell sizes be scaled up.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from tdabc.datasets import make_sphere
from tdabc.evaluation import FoldPlan, default_classifiers, run_experiment
from tdabc.rips import RipsConfig


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/shells", type=Path)
    parser.add_argument("--seeds", default=5, type=int)
    parser.add_argument("--folds", default=5, type=int)
    parser.add_argument(
        "--sizes",
        default="250,50,12,8,6",
        help="comma-separated shell sizes, inner to outer",
    )
    parser.add_argument("--budget", default=400_000, type=int)
    args = parser.parse_args(argv)

    sizes = tuple(int(s) for s in args.sizes.split(","))
    args.out.mkdir(parents=True, exist_ok=True)
    roster = default_classifiers()
    names = [spec.name for spec in roster]
    rips = RipsConfig(max_dim=2, budget=args.budget)

    print(f"shell sizes {sizes}, minority class = smallest shell")
    print(f"{'seed':<6}" + "".join(f"{n:>10}" for n in names))
    for seed in range(args.seeds):
        data = make_sphere(sizes=sizes, seed=seed)
        plan = FoldPlan(folds=args.folds, repeats=1, seed=seed)
        report = run_experiment(data, roster, plan, rips=rips)
        report.write_csv(args.out / f"shells_seed{seed}_report.csv")
        scores = [report.minority_mean(n, "f1") for n in names]
        print(f"{seed:<6}" + "".join(f"{s:>10.4f}" for s in scores))
    print(f"\nreports under {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
