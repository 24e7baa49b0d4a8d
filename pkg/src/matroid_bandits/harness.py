"""Seeded Monte Carlo trial execution, statistics, and serialization.

Success flags are judged from the true means and the returned basis only.
Trials are embarrassingly parallel with per-trial derived seeds, so results
are independent of the worker count.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .avg import avg_pac_recur_elim, naive_two
from .errors import BudgetError, ConfigError, DomainError, PreconditionError
from .exact import exact_exp_gap
from .instances import Instance
from .matroids import Matroid, basis_weight, greedy_max_basis, is_eps_optimal
from .pac import ConstantsProfile, PROFILES, PacResult, naive_one, pac_sample_prune

ALGORITHMS = ("naive1", "naive2", "pac", "exact", "avgpac")


def run_algorithm(session, matroid: Matroid, algo: str, eps: float, delta: float,
                  profile: ConstantsProfile) -> PacResult:
    if algo == "naive1":
        return naive_one(session, matroid, eps, delta)
    if algo == "naive2":
        return naive_two(session, matroid, eps, delta)
    if algo == "pac":
        return pac_sample_prune(session, matroid, eps, delta, profile)
    if algo == "exact":
        return exact_exp_gap(session, matroid, delta, profile)
    if algo == "avgpac":
        return avg_pac_recur_elim(session, matroid, eps, delta, profile)
    raise ConfigError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")


def success_flags(matroid: Matroid, means, basis, eps: float) -> dict[str, bool]:
    """Judge a returned basis against the true means.

    Uses the greedy optimum as ground truth; greedy agrees with exhaustive
    search (cross-checked by the oracle test suite) and scales to large
    instances where enumeration cannot.
    """
    opt = greedy_max_basis(matroid, means)
    k = matroid.full_rank
    proper = matroid.is_basis(basis)
    if not proper:
        return {"exact": False, "eps_optimal": False, "elementwise": False, "avg": False}
    mine = sorted((means[e] for e in basis), reverse=True)
    best = sorted((means[e] for e in opt), reverse=True)
    elementwise = all(x >= y - eps - 1e-12 for x, y in zip(mine, best))
    avg_ok = (
        k == 0
        or basis_weight(basis, means) / k >= basis_weight(opt, means) / k - eps - 1e-12
    )
    return {
        "exact": frozenset(basis) == opt,
        "eps_optimal": is_eps_optimal(matroid, basis, means, eps),
        "elementwise": elementwise,
        "avg": avg_ok,
    }


@dataclass(frozen=True)
class RunConfig:
    instance: Instance
    algo: str
    eps: float
    delta: float
    trials: int
    seed: int
    profile: ConstantsProfile
    jobs: int = 1
    trace: bool = False

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algo!r}")
        if self.trials < 0:
            raise ConfigError("trials must be >= 0")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.eps <= 0:
            raise ConfigError("eps must be > 0 (the exact solver still judges "
                              "eps-optimality flags at this eps)")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)")


@dataclass(frozen=True)
class TrialReport:
    index: int
    seed: tuple[int, int]  # (master seed, trial index) fed to the stream
    algo: str
    basis: tuple[int, ...]
    total_samples: int
    per_arm: tuple[int, ...]
    flags: dict[str, bool]
    error: str | None
    wall_time: float
    trace: tuple = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "seed": list(self.seed),
            "algo": self.algo,
            "basis": list(self.basis),
            "total_samples": self.total_samples,
            "per_arm_samples": list(self.per_arm),
            "flags": dict(self.flags),
            "error": self.error,
            "wall_time": self.wall_time,
        }


_FAILURE_KINDS = (BudgetError, PreconditionError, DomainError, AssertionError)


def _run_single_trial(args) -> TrialReport:
    config, index = args
    session = config.instance.trial_session(
        config.seed, index, max_pulls=config.profile.pull_budget
    )
    started = time.perf_counter()
    error = None
    trace: tuple = ()
    basis: tuple[int, ...] = ()
    try:
        result = run_algorithm(
            session, config.instance.matroid, config.algo,
            config.eps, config.delta, config.profile,
        )
        basis = tuple(sorted(result.basis))
        trace = result.transcript if config.trace else ()
        flags = success_flags(
            config.instance.matroid, config.instance.true_means, result.basis, config.eps
        )
    except _FAILURE_KINDS as exc:
        error = f"{type(exc).__name__}: {exc}"
        flags = {"exact": False, "eps_optimal": False, "elementwise": False, "avg": False}
    elapsed = time.perf_counter() - started
    return TrialReport(
        index=index,
        seed=(config.seed, index),
        algo=config.algo,
        basis=basis,
        total_samples=session.total_samples,
        per_arm=tuple(int(x) for x in session.pull_counts()),
        flags=flags,
        error=error,
        wall_time=elapsed,
        trace=trace,
    )


def binomial_lcb(successes: int, trials: int, confidence: float = 0.95) -> float:
    """Exact one-sided (Clopper-Pearson) lower confidence bound on a rate."""
    if trials == 0:
        return 0.0
    if successes == 0:
        return 0.0
    return float(stats.beta.ppf(1.0 - confidence, successes, trials - successes + 1))


def _quantiles(values) -> dict:
    if not values:
        return {"min": 0, "median": 0, "p90": 0, "max": 0}
    arr = np.asarray(values, dtype=np.float64)
    return {
        "min": int(arr.min()),
        "median": float(np.median(arr)),
        "p90": float(np.quantile(arr, 0.9)),
        "max": int(arr.max()),
    }


def run_trials(config: RunConfig) -> dict:
    """Execute the trial batch and aggregate. Budget errors count as failures."""
    args = [(config, i) for i in range(config.trials)]
    if config.jobs > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(_run_single_trial, args))
    else:
        reports = [_run_single_trial(a) for a in args]
    reports.sort(key=lambda rep: rep.index)
    return summarize(config, reports)


def summarize(config: RunConfig, reports: list[TrialReport]) -> dict:
    trials = len(reports)
    flag_names = ("exact", "eps_optimal", "elementwise", "avg")
    counts = {name: sum(1 for r in reports if r.flags[name]) for name in flag_names}
    samples = [r.total_samples for r in reports]
    per_arm_mean: list[float] = []
    if reports:
        stacked = np.array([r.per_arm for r in reports], dtype=np.float64)
        per_arm_mean = [float(x) for x in stacked.mean(axis=0)]
    summary = {
        "schema_version": 1,
        "instance": config.instance.name,
        "algo": config.algo,
        "eps": config.eps,
        "delta": config.delta,
        "trials": trials,
        "seed": config.seed,
        "constants": config.profile.name,
        "failures": sum(1 for r in reports if r.error is not None),
        "success": {
            name: {
                "count": counts[name],
                "rate": counts[name] / trials if trials else None,
                "lcb95": binomial_lcb(counts[name], trials),
            }
            for name in flag_names
        },
        "samples": _quantiles(samples),
        "per_arm_mean_pulls": per_arm_mean,
        "wall_time_total": math.fsum(r.wall_time for r in reports),
    }
    return {"summary": summary, "reports": reports}


def write_report(result: dict, out_path, trace: bool = False) -> None:
    """JSON report plus a CSV summary row; traces go to a sidecar .jsonl."""
    out_path = Path(out_path)
    summary = result["summary"]
    reports: list[TrialReport] = result["reports"]
    payload = {
        "summary": summary,
        "trials": [r.to_json() for r in reports],
    }
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")

    csv_path = out_path.with_suffix(".csv")
    fields = [
        "instance", "algo", "eps", "delta", "trials", "seed", "constants", "failures",
        "exact_rate", "exact_lcb95", "eps_optimal_rate", "eps_optimal_lcb95",
        "elementwise_rate", "elementwise_lcb95", "avg_rate", "avg_lcb95",
        "samples_min", "samples_median", "samples_p90", "samples_max",
    ]
    row = {
        "instance": summary["instance"],
        "algo": summary["algo"],
        "eps": summary["eps"],
        "delta": summary["delta"],
        "trials": summary["trials"],
        "seed": summary["seed"],
        "constants": summary["constants"],
        "failures": summary["failures"],
        "samples_min": summary["samples"]["min"],
        "samples_median": summary["samples"]["median"],
        "samples_p90": summary["samples"]["p90"],
        "samples_max": summary["samples"]["max"],
    }
    for name in ("exact", "eps_optimal", "elementwise", "avg"):
        row[f"{name}_rate"] = summary["success"][name]["rate"]
        row[f"{name}_lcb95"] = summary["success"][name]["lcb95"]
    with open(csv_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        writer.writerow(row)

    if trace:
        trace_path = out_path.with_suffix(".trace.jsonl")
        with open(trace_path, "w", encoding="utf-8") as handle:
            for rep in reports:
                for record in rep.trace:
                    handle.write(json.dumps(_trace_record(rep.index, record), sort_keys=True))
                    handle.write("\n")


def _trace_record(trial_index: int, record) -> dict:
    from .avg import AvgRound
    from .exact import ExactRound
    from .pac import PruneLevel

    base = {"trial": trial_index}
    if isinstance(record, ExactRound):
        base.update(
            kind=record.kind, r=record.r, size=len(record.ground),
            n_opt=record.n_opt, n_bad=record.n_bad,
            changed=len(record.changed), samples=record.samples_so_far,
        )
    elif isinstance(record, PruneLevel):
        size_s, size_f, size_keep = record.sizes
        base.update(
            kind="prune_level", depth=record.depth, base_case=record.base_case,
            size=size_s, sampled=size_f, kept=size_keep,
        )
    elif isinstance(record, AvgRound):
        base.update(
            kind="avg_round", r=record.r, size_before=record.size_before,
            size_after=record.size_after, eps_r=record.eps_r,
            delta_r=record.delta_r, samples=record.samples_so_far,
        )
    else:
        base.update(kind="unknown", repr=repr(record))
    return base


def profile_by_name(name: str) -> ConstantsProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ConfigError(f"unknown constants profile {name!r}; choose from {sorted(PROFILES)}")
