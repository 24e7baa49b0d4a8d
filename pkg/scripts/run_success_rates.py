#!/usr/bin/env python3
"""Sweep every algorithm over the builtin instances and tabulate success rates.

Example:
    python scripts/run_success_rates.py --trials 50 --seed 7 --out rates.json
"""

import argparse
import json

from matroid_bandits.harness import ALGORITHMS, RunConfig, run_trials
from matroid_bandits.instances import BUILTINS, builtin
from matroid_bandits.pac import PROFILES


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--eps", type=float, default=0.1)
    parser.add_argument("--delta", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--constants", default="desk", choices=sorted(PROFILES))
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default=None, help="optional JSON output path")
    args = parser.parse_args()

    rows = []
    header = f"{'instance':<14}{'algo':<9}{'exact':>7}{'eps':>7}{'elem':>7}{'avg':>7}{'med samples':>14}"
    print(header)
    print("-" * len(header))
    for name in sorted(BUILTINS):
        inst = builtin(name)
        for algo in ALGORITHMS:
            config = RunConfig(
                inst, algo, args.eps, args.delta, args.trials, args.seed,
                PROFILES[args.constants], jobs=args.jobs,
            )
            summary = run_trials(config)["summary"]
            rates = {k: v["rate"] for k, v in summary["success"].items()}
            rows.append({"instance": name, "algo": algo, **rates,
                         "samples_median": summary["samples"]["median"]})
            print(
                f"{name:<14}{algo:<9}"
                f"{rates['exact']:>7.2f}{rates['eps_optimal']:>7.2f}"
                f"{rates['elementwise']:>7.2f}{rates['avg']:>7.2f}"
                f"{summary['samples']['median']:>14.0f}"
            )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(rows, handle, indent=2, sort_keys=True)
        print(f"\nwrote {args.out}")


if __name__ == "__main__":
    main()
