"""Exact optimal-basis identification by alternating round types.

While suboptimal arms are in the majority, an elimination round solves the
current matroid approximately and discards arms its solution blocks. Once
remaining-optimal arms dominate, a selection round commits every arm that no
set of competitors can block and contracts it away. Accuracy doubles and
confidence tightens on a fixed per-round schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetError, DomainError, InvariantError
from .matroids import Matroid
from .pac import ConstantsProfile, PacResult, pac_sample_prune
from .sampling import SamplingSession

ELIMINATION = "elimination"
SELECTION = "selection"
FINAL_SELECT = "final_select"


@dataclass(frozen=True)
class ExactRound:
    """One round's observables for traces and tests."""

    kind: str
    r: int
    ground: tuple[int, ...]
    n_opt: int
    n_bad: int
    changed: tuple[int, ...]
    samples_so_far: int


def round_schedule(r: int, delta: float) -> tuple[float, float]:
    """Accuracy/confidence pair used in round ``r`` (halving / cubic decay)."""
    if not isinstance(r, int) or r < 1:
        raise DomainError("round index must be an integer >= 1")
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    return 2.0**-r / 4.0, delta / (100.0 * r**3)


def _assert_no_loops(m: Matroid) -> None:
    for e in m.ground:
        if m.rank({e}) == 0:
            raise InvariantError(f"loop {e} appeared in the working matroid")


def exact_exp_gap(
    session: SamplingSession,
    m: Matroid,
    delta: float,
    profile: ConstantsProfile,
) -> PacResult:
    """Identify the unique optimal basis with confidence 1 - delta.

    Requires distinct true means (not verifiable from samples; instance
    generation enforces it). Raises ``BudgetError`` when the round guard is
    exceeded, i.e. some gap is finer than the guard can resolve.
    """
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    answer: set[int] = set()
    m_cur: Matroid = m
    r_elim = 1
    r_sele = 1
    transcript: list[ExactRound] = []
    start = session.total_samples

    while True:
        _assert_no_loops(m_cur)
        current = m_cur.ground
        n_opt = m_cur.full_rank
        n_bad = len(current) - n_opt

        if n_opt <= n_bad:
            if n_opt == 0:
                break
            if r_elim > profile.round_guard:
                raise BudgetError(f"elimination round guard {profile.round_guard} exceeded")
            r = r_elim
            eps_r, delta_r = round_schedule(r, delta)
            r_elim += 1

            inner = pac_sample_prune(session, m_cur, eps_r, delta_r, profile).basis
            means = session.uniform_sample(inner, eps_r / 2.0, delta_r / n_opt)
            rest = set(current) - inner
            means.update(session.uniform_sample(rest, eps_r, delta_r / n_opt))

            kept = set(inner)
            for e in current:
                if e in inner:
                    continue
                threshold = means[e] + 1.5 * eps_r
                blockers = frozenset(a for a in inner if means[a] >= threshold)
                if not m_cur.blocks(blockers, e):
                    kept.add(e)
            survivors = frozenset(kept)
            if m_cur.rank(survivors) != n_opt:
                raise InvariantError("elimination dropped the rank of the survivors")
            transcript.append(
                ExactRound(
                    ELIMINATION, r, current, n_opt, n_bad,
                    tuple(sorted(survivors)), session.total_samples - start,
                )
            )
            m_cur = m_cur.restrict(survivors)
        else:
            if n_bad == 0:
                answer |= set(current)
                transcript.append(
                    ExactRound(
                        FINAL_SELECT, r_sele, current, n_opt, n_bad,
                        current, session.total_samples - start,
                    )
                )
                break
            if r_sele > profile.round_guard:
                raise BudgetError(f"selection round guard {profile.round_guard} exceeded")
            r = r_sele
            eps_r, delta_r = round_schedule(r, delta)
            r_sele += 1

            means = session.uniform_sample(current, eps_r, delta_r / len(current))
            picked: set[int] = set()
            for e in current:
                threshold = means[e] - 2.0 * eps_r
                blockers = frozenset(
                    a for a in current if a != e and means[a] >= threshold
                )
                if not m_cur.blocks(blockers, e):
                    picked.add(e)
            if not m_cur.is_independent(picked):
                raise InvariantError("selected arms are not jointly independent")
            answer |= picked
            transcript.append(
                ExactRound(
                    SELECTION, r, current, n_opt, n_bad,
                    tuple(sorted(picked)), session.total_samples - start,
                )
            )
            m_cur = m_cur.contract(picked)

    return PacResult(frozenset(answer), session.total_samples - start, tuple(transcript))
