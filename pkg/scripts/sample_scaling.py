#!/usr/bin/env python3
"""Measure how sample counts scale with the accuracy target and the gaps.

Two sweeps: the uniform baseline across a grid of eps values (deterministic
formula), and the exact solver across four-arm instances whose common gap
shrinks geometrically.

Example:
    python scripts/sample_scaling.py --trials 30
"""

import argparse
import statistics

from matroid_bandits.exact import exact_exp_gap
from matroid_bandits.instances import make_instance, uniform_gap_instance
from matroid_bandits.pac import PAPER
from matroid_bandits.pac import naive_one
from matroid_bandits.sampling import bernoulli


def four_arm_gap_instance(g: float):
    eta = g / 50.0
    means = (0.5 + g + eta, 0.5 + g, 0.5, 0.5 - eta)
    return make_instance(
        f"four-arm-gap-{g}",
        {"family": "uniform", "n": 4, "k": 2},
        [bernoulli(mu) for mu in means],
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=30)
    parser.add_argument("--delta", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print("uniform baseline on a 24-arm pick-4 instance:")
    inst = uniform_gap_instance(24, 4, 0.1, seed=args.seed)
    prev = None
    for eps in (0.4, 0.2, 0.1, 0.05):
        session = inst.trial_session(args.seed, 0)
        naive_one(session, inst.matroid, eps, args.delta)
        total = session.total_samples
        note = f"  x{total / prev:.2f} vs previous eps" if prev else ""
        print(f"  eps={eps:<6} samples={total:>12}{note}")
        prev = total

    print("\nexact solver on four-arm instances, gap halving each row:")
    prev = None
    for g in (0.4, 0.2, 0.1, 0.05):
        inst = four_arm_gap_instance(g)
        totals = []
        for i in range(args.trials):
            session = inst.trial_session(args.seed + 1, i)
            exact_exp_gap(session, inst.matroid, args.delta, PAPER)
            totals.append(session.total_samples)
        med = statistics.median(totals)
        note = f"  x{med / prev:.2f} vs previous gap" if prev else ""
        print(f"  gap={g:<6} median={med:>12.0f}{note}")
        prev = med


if __name__ == "__main__":
    main()
