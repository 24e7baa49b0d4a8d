"""Matroid oracles over integer ground sets.

Five concrete families (uniform, partition, laminar, graphic, transversal),
lazy restriction/contraction views, the blocking predicate, greedy maximum
weight basis, and optimality / eps-optimality checkers.

Element ids are stable across views: a view exposes a subset of its parent's
ids and never renumbers.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, PreconditionError, ValidationError

ElementSet = frozenset[int]

# Weight lookups accept anything indexable by element id (dict, list, array).
Weights = Mapping[int, float] | Sequence[float]


class Matroid:
    """Base class: concrete families implement ``rank`` over their ground set.

    Instances are immutable after construction and safe to share across
    concurrent workers.
    """

    _ground: tuple[int, ...]
    _ground_set: ElementSet
    _full_rank: int | None

    def _init_ground(self, ground: Iterable[int]) -> None:
        self._ground = tuple(sorted(set(ground)))
        self._ground_set = frozenset(self._ground)
        self._full_rank = None

    @property
    def ground(self) -> tuple[int, ...]:
        return self._ground

    @property
    def ground_set(self) -> ElementSet:
        return self._ground_set

    @property
    def size(self) -> int:
        return len(self._ground)

    @property
    def full_rank(self) -> int:
        """rank of the whole ground set (the common size of all bases)."""
        if self._full_rank is None:
            self._full_rank = self.rank(self._ground_set)
        return self._full_rank

    def _as_subset(self, elements: Iterable[int]) -> ElementSet:
        subset = frozenset(elements)
        if not subset <= self._ground_set:
            bad = sorted(subset - self._ground_set)
            raise DomainError(f"elements {bad} outside ground set")
        return subset

    def rank(self, elements: Iterable[int]) -> int:
        raise NotImplementedError

    def is_independent(self, elements: Iterable[int]) -> bool:
        subset = self._as_subset(elements)
        return self.rank(subset) == len(subset)

    def is_basis(self, elements: Iterable[int]) -> bool:
        subset = self._as_subset(elements)
        return len(subset) == self.full_rank and self.is_independent(subset)

    def blocks(self, elements: Iterable[int], e: int) -> bool:
        """True iff adding ``e`` to ``elements`` does not raise the rank."""
        subset = self._as_subset(elements)
        if e in subset:
            raise DomainError(f"element {e} is inside the blocking set")
        if e not in self._ground_set:
            raise DomainError(f"element {e} outside ground set")
        return self.rank(subset | {e}) == self.rank(subset)

    def restrict(self, keep: Iterable[int]) -> "Matroid":
        keep_set = self._as_subset(keep)
        if keep_set == self._ground_set:
            return self
        return _RestrictionView(self, keep_set)

    def contract(self, committed: Iterable[int]) -> "Matroid":
        committed_set = self._as_subset(committed)
        if not committed_set:
            return self
        return _ContractionView(self, committed_set)

    def isolated_and_loops(self) -> tuple[ElementSet, ElementSet]:
        """(elements in every basis, elements in no basis)."""
        total = self.full_rank
        isolated = frozenset(
            e for e in self._ground if self.rank(self._ground_set - {e}) < total
        )
        loops = frozenset(e for e in self._ground if self.rank({e}) == 0)
        return isolated, loops


class UniformMatroid(Matroid):
    """Independent sets are all subsets of size at most ``k``."""

    def __init__(self, n: int, k: int):
        if n < 0 or k < 0:
            raise ValidationError("uniform matroid needs n >= 0 and k >= 0")
        self._init_ground(range(n))
        self.k = min(k, n)

    def rank(self, elements: Iterable[int]) -> int:
        subset = self._as_subset(elements)
        return min(len(subset), self.k)

    def is_independent(self, elements: Iterable[int]) -> bool:
        return len(self._as_subset(elements)) <= self.k


class PartitionMatroid(Matroid):
    """Disjoint groups covering the ground set, each with a capacity."""

    def __init__(self, groups: Sequence[tuple[Iterable[int], int]]):
        members_by_group = []
        caps = []
        seen: set[int] = set()
        for members, cap in groups:
            mset = frozenset(members)
            if cap < 0:
                raise ValidationError("group capacity must be >= 0")
            if mset & seen:
                raise ValidationError("partition groups must be disjoint")
            seen |= mset
            members_by_group.append(mset)
            caps.append(cap)
        self._init_ground(seen)
        self._caps = tuple(caps)
        self._group_of = {e: gi for gi, mset in enumerate(members_by_group) for e in mset}
        self._groups = tuple(members_by_group)

    def rank(self, elements: Iterable[int]) -> int:
        subset = self._as_subset(elements)
        counts = [0] * len(self._caps)
        for e in subset:
            counts[self._group_of[e]] += 1
        return sum(min(c, cap) for c, cap in zip(counts, self._caps))

    def is_independent(self, elements: Iterable[int]) -> bool:
        subset = self._as_subset(elements)
        counts = [0] * len(self._caps)
        for e in subset:
            gi = self._group_of[e]
            counts[gi] += 1
            if counts[gi] > self._caps[gi]:
                return False
        return True


class LaminarMatroid(Matroid):
    """Capacity constraints over a nested (laminar) family of sets.

    A set is independent iff it meets every family set within that set's
    capacity. Elements not covered by any family set are unconstrained.
    """

    def __init__(self, n: int, sets: Sequence[tuple[Iterable[int], int]]):
        if n < 0:
            raise ValidationError("laminar matroid needs n >= 0")
        self._init_ground(range(n))
        family = []
        caps = []
        for members, cap in sets:
            mset = frozenset(members)
            if not mset <= self._ground_set:
                raise ValidationError("laminar set contains unknown elements")
            if cap < 0:
                raise ValidationError("laminar capacity must be >= 0")
            family.append(mset)
            caps.append(cap)
        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                a, b = family[i], family[j]
                if a & b and not (a <= b or b <= a):
                    raise ValidationError("laminar family must be nested")
        self._family = tuple(family)
        self._caps = tuple(caps)
        self._covers = {
            e: tuple(si for si, mset in enumerate(family) if e in mset)
            for e in self._ground
        }

    def is_independent(self, elements: Iterable[int]) -> bool:
        subset = self._as_subset(elements)
        counts = [0] * len(self._family)
        for e in subset:
            for si in self._covers[e]:
                counts[si] += 1
                if counts[si] > self._caps[si]:
                    return False
        return True

    def rank(self, elements: Iterable[int]) -> int:
        # Greedy insertion computes the max independent subset of a matroid.
        subset = self._as_subset(elements)
        counts = [0] * len(self._family)
        taken = 0
        for e in sorted(subset):
            if all(counts[si] < self._caps[si] for si in self._covers[e]):
                for si in self._covers[e]:
                    counts[si] += 1
                taken += 1
        return taken


class GraphicMatroid(Matroid):
    """Edges of a multigraph; independent sets are forests.

    Element ``i`` is the ``i``-th edge. Rank queries run union-find over the
    queried edges only. Self-loops are matroid loops.
    """

    def __init__(self, num_vertices: int, edges: Sequence[tuple[int, int]]):
        if num_vertices < 0:
            raise ValidationError("graphic matroid needs num_vertices >= 0")
        for u, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValidationError(f"edge ({u}, {v}) has an unknown endpoint")
        self.num_vertices = num_vertices
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        self._init_ground(range(len(self.edges)))

    def rank(self, elements: Iterable[int]) -> int:
        subset = self._as_subset(elements)
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            root = x
            while parent.setdefault(root, root) != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        taken = 0
        for eid in sorted(subset):
            u, v = self.edges[eid]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                taken += 1
        return taken


class TransversalMatroid(Matroid):
    """Tasks matchable to distinct workers in a bipartite graph.

    Elements are tasks; ``workers[j]`` lists the tasks worker ``j`` can do.
    A task set is independent iff a matching saturates it. Rank queries use
    augmenting paths, memoized on the query set (results are pure, so the
    cache is safe under concurrent readers).
    """

    _MEMO_LIMIT = 200_000

    def __init__(self, n: int, workers: Sequence[Iterable[int]]):
        if n < 0:
            raise ValidationError("transversal matroid needs n >= 0")
        self._init_ground(range(n))
        adj: list[list[int]] = [[] for _ in range(n)]
        for wi, tasks in enumerate(workers):
            for t in tasks:
                if not 0 <= t < n:
                    raise ValidationError(f"worker {wi} references unknown task {t}")
                adj[t].append(wi)
        self.workers = tuple(tuple(sorted(set(ts))) for ts in workers)
        self._task_adj = tuple(tuple(sorted(set(ws))) for ws in adj)
        self._rank_memo: dict[ElementSet, int] = {}

    def rank(self, elements: Iterable[int]) -> int:
        subset = self._as_subset(elements)
        cached = self._rank_memo.get(subset)
        if cached is not None:
            return cached
        owner: dict[int, int] = {}

        def augment(task: int, seen: set[int]) -> bool:
            for w in self._task_adj[task]:
                if w in seen:
                    continue
                seen.add(w)
                if w not in owner or augment(owner[w], seen):
                    owner[w] = task
                    return True
            return False

        matched = sum(1 for t in sorted(subset) if augment(t, set()))
        if len(self._rank_memo) >= self._MEMO_LIMIT:
            self._rank_memo.clear()
        self._rank_memo[subset] = matched
        return matched


class _RestrictionView(Matroid):
    """Sub-matroid on a subset of the parent's ground set."""

    def __init__(self, parent: Matroid, keep: ElementSet):
        self._parent = parent
        self._init_ground(keep)

    def rank(self, elements: Iterable[int]) -> int:
        return self._parent.rank(self._as_subset(elements))

    def is_independent(self, elements: Iterable[int]) -> bool:
        return self._parent.is_independent(self._as_subset(elements))

    def restrict(self, keep: Iterable[int]) -> Matroid:
        keep_set = self._as_subset(keep)
        if keep_set == self._ground_set:
            return self
        return _RestrictionView(self._parent, keep_set)

    def contract(self, committed: Iterable[int]) -> Matroid:
        committed_set = self._as_subset(committed)
        if not committed_set:
            return self
        return _ContractionView(self, committed_set)


class _ContractionView(Matroid):
    """Matroid conditioned on committing an independent set.

    The ground set drops the committed elements and everything they block,
    so contraction never introduces loops.
    """

    def __init__(self, parent: Matroid, committed: ElementSet):
        committed = parent._as_subset(committed)
        if not parent.is_independent(committed):
            raise PreconditionError("can only contract an independent set")
        self._parent = parent
        self._committed = committed
        ground = [
            e
            for e in parent.ground
            if e not in committed and not parent.blocks(committed, e)
        ]
        self._init_ground(ground)

    def rank(self, elements: Iterable[int]) -> int:
        subset = self._as_subset(elements)
        return self._parent.rank(subset | self._committed) - len(self._committed)

    def is_independent(self, elements: Iterable[int]) -> bool:
        subset = self._as_subset(elements)
        return self._parent.is_independent(subset | self._committed)

    def contract(self, committed: Iterable[int]) -> Matroid:
        extra = self._as_subset(committed)
        if not extra:
            return self
        if not self.is_independent(extra):
            raise PreconditionError("can only contract an independent set")
        return _ContractionView(self._parent, self._committed | extra)

    def restrict(self, keep: Iterable[int]) -> Matroid:
        keep_set = self._as_subset(keep)
        if keep_set == self._ground_set:
            return self
        inner = self._parent.restrict(keep_set | self._committed)
        return _ContractionView(inner, self._committed)


def _weight(weights: Weights, e: int) -> float:
    try:
        return float(weights[e])
    except (KeyError, IndexError) as exc:
        raise DomainError(f"no weight defined for element {e}") from exc


def greedy_max_basis(m: Matroid, weights: Weights) -> ElementSet:
    """Maximum-weight basis by the greedy algorithm.

    Ties are broken by (weight desc, id asc), so the result is well defined
    even when empirical weights collide. With distinct weights this is the
    unique optimum.
    """
    order = sorted(m.ground, key=lambda e: (-_weight(weights, e), e))
    chosen: set[int] = set()
    for e in order:
        if m.is_independent(chosen | {e}):
            chosen.add(e)
    return frozenset(chosen)


def basis_weight(basis: Iterable[int], weights: Weights) -> float:
    return math.fsum(_weight(weights, e) for e in basis)


def is_optimal_basis(m: Matroid, basis: Iterable[int], weights: Weights) -> bool:
    """True iff every excluded element is blocked by its heavier part of the basis."""
    bset = m._as_subset(basis)
    if not m.is_basis(bset):
        raise PreconditionError("candidate set is not a basis")
    for e in m.ground:
        if e in bset:
            continue
        threshold = _weight(weights, e)
        heavy = frozenset(a for a in bset if _weight(weights, a) >= threshold)
        if not m.blocks(heavy, e):
            return False
    return True


def is_eps_optimal(m: Matroid, basis: Iterable[int], weights: Weights, eps: float) -> bool:
    """True iff the basis becomes optimal once all its weights gain ``eps``.

    Checked through the blocking characterization: every excluded element
    must be blocked by basis elements of weight >= (its own weight - eps).
    Comparisons are exact float comparisons. Monotone in ``eps``.
    """
    if eps < 0:
        raise DomainError("eps must be >= 0")
    bset = m._as_subset(basis)
    if not m.is_basis(bset):
        raise PreconditionError("candidate set is not a basis")
    for e in m.ground:
        if e in bset:
            continue
        threshold = _weight(weights, e) - eps
        heavy = frozenset(a for a in bset if _weight(weights, a) >= threshold)
        if not m.blocks(heavy, e):
            return False
    return True


def is_eps_optimal_modified_cost(
    m: Matroid, basis: Iterable[int], weights: Weights, eps: float
) -> bool:
    """Same predicate via its definition: optimality under the lifted costs.

    Kept as an independent second route; tests cross-check it against
    :func:`is_eps_optimal` on small instances.
    """
    if eps < 0:
        raise DomainError("eps must be >= 0")
    bset = m._as_subset(basis)
    if not m.is_basis(bset):
        raise PreconditionError("candidate set is not a basis")
    lifted = {
        e: _weight(weights, e) + (eps if e in bset else 0.0) for e in m.ground
    }
    best = greedy_max_basis(m, lifted)
    return basis_weight(bset, lifted) >= basis_weight(best, lifted) - 1e-12
