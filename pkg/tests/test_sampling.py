import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matroid_bandits.errors import BudgetError, DomainError, ValidationError
from matroid_bandits.sampling import (
    Arm,
    SamplingSession,
    bernoulli,
    point,
    sample_size,
    scaled,
    trial_seed,
)


def test_arm_validation():
    with pytest.raises(ValidationError):
        Arm("bernoulli", 1.5)
    with pytest.raises(ValidationError):
        Arm("gaussian", 0.5)
    with pytest.raises(ValidationError):
        Arm("scaled", 0.5)  # support required
    with pytest.raises(ValidationError):
        scaled(0.6, 0.4, 0.5)  # lo >= hi
    with pytest.raises(ValidationError):
        scaled(0.2, 0.4, 0.5)  # mean outside support
    with pytest.raises(ValidationError):
        Arm("point", 0.5, (0.1, 0.9))


def test_point_mass_pull_is_exact():
    session = SamplingSession([point(0.5)], seed=0)
    assert all(session.pull(0) == 0.5 for _ in range(10))
    assert session.pull_batch(0, 1000) == 0.5


def test_bernoulli_extremes():
    session = SamplingSession([bernoulli(1.0), bernoulli(0.0)], seed=0)
    assert all(session.pull(0) == 1.0 for _ in range(10))
    assert all(session.pull(1) == 0.0 for _ in range(10))


def test_bernoulli_mean_within_four_sigma():
    session = SamplingSession([bernoulli(0.3)], seed=123)
    mean = session.pull_batch(0, 100_000)
    assert abs(mean - 0.3) < 0.006  # 4 * sqrt(0.21 / 1e5)


def test_single_pulls_match_distribution():
    session = SamplingSession([bernoulli(0.4)], seed=7)
    values = [session.pull(0) for _ in range(20_000)]
    assert set(values) <= {0.0, 1.0}
    assert abs(np.mean(values) - 0.4) < 5 * math.sqrt(0.24 / 20_000)


def test_scaled_arm_support_and_mean():
    session = SamplingSession([scaled(0.2, 0.6, 0.5)], seed=11)
    values = [session.pull(0) for _ in range(2000)]
    assert set(values) <= {0.2, 0.6}
    q = (0.5 - 0.2) / 0.4
    sigma = 0.4 * math.sqrt(q * (1 - q))
    mean = session.pull_batch(0, 100_000)
    assert abs(mean - 0.5) < 4 * sigma / math.sqrt(100_000)


def test_unknown_arm_rejected():
    session = SamplingSession([point(0.5)], seed=0)
    with pytest.raises(DomainError):
        session.pull(3)


def test_sample_size_examples():
    assert sample_size(0.1, 0.05) == 185
    assert sample_size(1.0, 1.0 / (2.0 * math.e**2)) == math.ceil(math.log(4 * math.e**2) / 2)
    assert sample_size(10.0, 0.9) == 1  # floor of one pull
    with pytest.raises(DomainError):
        sample_size(0.0, 0.5)
    with pytest.raises(DomainError):
        sample_size(0.1, 1.0)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.01, max_value=2.0),
    st.floats(min_value=1e-6, max_value=0.999),
)
def test_sample_size_monotone(eps, delta):
    q = sample_size(eps, delta)
    assert q >= 1
    assert sample_size(eps / 2, delta) >= q
    assert sample_size(eps, delta / 2) >= q


def test_uniform_sample_counts_and_total():
    session = SamplingSession([point(0.2), point(0.4), point(0.6), point(0.8)], seed=0)
    means = session.uniform_sample({0, 1, 2}, 0.1, 0.05)
    assert means == {0: 0.2, 1: 0.4, 2: 0.6}
    assert session.pull_counts() == [185, 185, 185, 0]
    assert session.total_samples == 555
    session.uniform_sample({3}, 0.1, 0.05)
    assert session.total_samples == 555 + 185  # ledger additivity


def test_uniform_sample_fresh_batches():
    session = SamplingSession([bernoulli(0.5)], seed=5)
    session.uniform_sample({0}, 0.2, 0.3)
    q = session.pull_counts()[0]
    sums_before = session.reward_sums()[0]
    second = session.uniform_sample({0}, 0.2, 0.3)[0]
    assert session.pull_counts()[0] == 2 * q
    # the returned mean is computed from this batch's pulls only
    assert second == pytest.approx((session.reward_sums()[0] - sums_before) / q)


def test_uniform_sample_validates_parameters():
    session = SamplingSession([point(0.5)], seed=0)
    with pytest.raises(DomainError):
        session.uniform_sample({0}, -1.0, 0.5)
    with pytest.raises(DomainError):
        session.uniform_sample({0}, 0.5, 2.0)


def test_fresh_session_has_zero_samples():
    assert SamplingSession([point(0.5)], seed=0).total_samples == 0


def test_determinism_same_seed():
    def transcript(seed):
        s = SamplingSession([bernoulli(0.3), bernoulli(0.7)], seed=seed)
        out = [s.pull(0) for _ in range(50)]
        out += list(s.uniform_sample({0, 1}, 0.3, 0.3).values())
        out.append(tuple(sorted(s.random_subset({0, 1}, 0.5))))
        return out

    assert transcript(42) == transcript(42)
    assert transcript(42) != transcript(43)


def test_trial_seed_derivation_is_stable():
    a = SamplingSession([bernoulli(0.5)], trial_seed(99, 3))
    b = SamplingSession([bernoulli(0.5)], trial_seed(99, 3))
    c = SamplingSession([bernoulli(0.5)], trial_seed(99, 4))
    seq_a = [a.pull(0) for _ in range(20)]
    seq_b = [b.pull(0) for _ in range(20)]
    seq_c = [c.pull(0) for _ in range(20)]
    assert seq_a == seq_b
    assert seq_a != seq_c


def test_random_subset_probability():
    session = SamplingSession([point(0.5)], seed=1)
    sizes = [len(session.random_subset(range(200), 0.3)) for _ in range(200)]
    assert abs(np.mean(sizes) - 60) < 4 * math.sqrt(200 * 0.3 * 0.7 / 200) + 1


def test_budget_enforced():
    session = SamplingSession([bernoulli(0.5)], seed=0, max_pulls=100)
    with pytest.raises(BudgetError):
        session.pull_batch(0, 101)


def test_concentration_rate_within_declared_delta():
    eps, delta = 0.2, 0.1
    misses = 0
    reps = 1000
    session = SamplingSession([bernoulli(0.5)], seed=77)
    for _ in range(reps):
        mean = session.uniform_sample({0}, eps, delta)[0]
        if abs(mean - 0.5) >= eps:
            misses += 1
    slack = 3 * math.sqrt(delta * (1 - delta) / reps)
    assert misses / reps <= delta + slack
