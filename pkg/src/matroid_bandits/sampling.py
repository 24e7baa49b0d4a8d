"""Stochastic arm environment with exact per-arm sample accounting.

A :class:`SamplingSession` owns the RNG and the pull ledger for one trial.
Algorithms see arms only through ``pull`` / ``pull_batch`` /
``uniform_sample``; true means stay on the instance side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetError, DomainError, ValidationError

BERNOULLI = "bernoulli"
SCALED = "scaled"
POINT = "point"


@dataclass(frozen=True)
class Arm:
    """One reward source: Bernoulli, two-point scaled Bernoulli, or point mass."""

    kind: str
    mean: float
    support: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in (BERNOULLI, SCALED, POINT):
            raise ValidationError(f"unknown arm kind {self.kind!r}")
        if not 0.0 <= self.mean <= 1.0:
            raise ValidationError(f"arm mean {self.mean} outside [0, 1]")
        if self.kind == SCALED:
            if self.support is None:
                raise ValidationError("scaled arm needs a (lo, hi) support")
            lo, hi = self.support
            if not (0.0 <= lo < hi <= 1.0):
                raise ValidationError(f"scaled support {self.support} invalid")
            if not lo <= self.mean <= hi:
                raise ValidationError("scaled arm mean outside its support")
        elif self.support is not None:
            raise ValidationError(f"{self.kind} arm takes no support")


def bernoulli(mean: float) -> Arm:
    return Arm(BERNOULLI, mean)


def point(mean: float) -> Arm:
    return Arm(POINT, mean)


def scaled(lo: float, hi: float, mean: float) -> Arm:
    return Arm(SCALED, mean, (lo, hi))


def sample_size(eps: float, delta: float) -> int:
    """Per-arm pull count guaranteeing |empirical - true| < eps w.p. 1 - delta.

    Fractional counts are ceiled, minimum one pull.
    """
    if eps <= 0:
        raise DomainError("eps must be > 0")
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    return max(1, math.ceil(eps**-2 * math.log(2.0 / delta) / 2.0))


class SamplingSession:
    """Seeded RNG plus exact per-arm pull counters for a single trial.

    Single-owner: one trial, one worker. Distinct sessions run concurrently
    without coordination. Identical seed implies an identical pull transcript
    and hence identical algorithm output.
    """

    def __init__(
        self,
        arms: Sequence[Arm],
        seed: int | np.random.SeedSequence,
        max_pulls: int | None = None,
    ):
        self._arms = tuple(arms)
        self._rng = np.random.default_rng(seed)
        # plain Python ints: pull counts can exceed int64 in deep rounds
        self._pulls = [0] * len(self._arms)
        self._sums = [0.0] * len(self._arms)
        self._total = 0
        self._max_pulls = max_pulls

    @property
    def num_arms(self) -> int:
        return len(self._arms)

    @property
    def total_samples(self) -> int:
        return self._total

    def pull_counts(self) -> list[int]:
        return list(self._pulls)

    def reward_sums(self) -> list[float]:
        return list(self._sums)

    def _check_arm(self, e: int) -> Arm:
        if not 0 <= e < len(self._arms):
            raise DomainError(f"unknown arm {e}")
        return self._arms[e]

    def _check_budget(self) -> None:
        if self._max_pulls is not None and self.total_samples > self._max_pulls:
            raise BudgetError(f"pull budget {self._max_pulls} exhausted")

    def pull(self, e: int) -> float:
        """Draw one reward in [0, 1] and record it."""
        arm = self._check_arm(e)
        if arm.kind == POINT:
            value = arm.mean
        elif arm.kind == BERNOULLI:
            value = 1.0 if self._rng.random() < arm.mean else 0.0
        else:
            lo, hi = arm.support
            q = (arm.mean - lo) / (hi - lo)
            value = hi if self._rng.random() < q else lo
        self._pulls[e] += 1
        self._sums[e] += value
        self._total += 1
        self._check_budget()
        return value

    def pull_batch(self, e: int, count: int) -> float:
        """Pull ``count`` fresh samples of one arm; return the batch mean.

        Bernoulli-type batches draw a single binomial variate, which is the
        same distribution as ``count`` individual pulls.
        """
        if count < 1:
            raise DomainError("batch size must be >= 1")
        arm = self._check_arm(e)
        if arm.kind != POINT and count > 2**62:
            raise BudgetError(f"batch of {count} stochastic pulls is not drawable")
        if arm.kind == POINT:
            total = arm.mean * count
            mean = arm.mean
        elif arm.kind == BERNOULLI:
            hits = int(self._rng.binomial(count, arm.mean))
            total = float(hits)
            mean = hits / count
        else:
            lo, hi = arm.support
            q = (arm.mean - lo) / (hi - lo)
            hits = int(self._rng.binomial(count, q))
            total = lo * (count - hits) + hi * hits
            mean = total / count
        self._pulls[e] += count
        self._sums[e] += total
        self._total += count
        self._check_budget()
        return mean

    def uniform_sample(
        self, elements: Iterable[int], eps: float, delta: float
    ) -> dict[int, float]:
        """Pull every element exactly ``sample_size(eps, delta)`` fresh times.

        Returns the fresh-batch empirical means only; earlier pulls of the
        same arms never leak into the estimate.
        """
        count = sample_size(eps, delta)
        return {e: self.pull_batch(e, count) for e in sorted(set(elements))}

    def random_subset(self, elements: Iterable[int], p: float) -> frozenset[int]:
        """Keep each element independently with probability ``p``."""
        if not 0.0 <= p <= 1.0:
            raise DomainError("p must lie in [0, 1]")
        ordered = sorted(set(elements))
        draws = self._rng.random(len(ordered))
        return frozenset(e for e, u in zip(ordered, draws) if u < p)


def trial_seed(master_seed: int, trial_index: int) -> np.random.SeedSequence:
    """Deterministic per-trial stream, independent of worker scheduling."""
    return np.random.SeedSequence((int(master_seed), int(trial_index)))
