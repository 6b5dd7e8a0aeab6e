"""Finite coarse spaces and the algebra of indexed covers.

Points are ids 0..n-1.  A space carries a gauge cover; every notion of
"bounded" below is chain diameter measured in the gauge's chain graph.
A cover is an indexed family of point subsets.  The index order is the
well-order used by the shrinking construction, and shrinking outputs keep
empty members (flagged via ``allow_empty``) so their index set stays
aligned with the cover they shrink.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import InputError, PreconditionError
from .extnat import INFINITY, ExtNat


@dataclass(frozen=True)
class Cover:
    """Indexed family of subsets of {0, ..., n_points-1} whose union is everything."""

    sets: tuple[frozenset[int], ...]
    n_points: int
    allow_empty: bool = False

    def __post_init__(self):
        if self.n_points <= 0:
            raise InputError("a cover needs a positive number of points")
        if not self.sets:
            raise InputError("a cover needs at least one element")
        covered = set()
        for i, s in enumerate(self.sets):
            if not s and not self.allow_empty:
                raise InputError(f"cover element {i} is empty")
            for x in s:
                if not (0 <= x < self.n_points):
                    raise InputError(f"cover element {i} contains unknown point {x}")
            covered.update(s)
        if len(covered) != self.n_points:
            missing = min(set(range(self.n_points)) - covered)
            raise InputError(f"cover misses point {missing}")

    @staticmethod
    def of(sets: Iterable[Iterable[int]], n_points: int, allow_empty: bool = False) -> "Cover":
        return Cover(tuple(frozenset(int(x) for x in s) for s in sets), n_points, allow_empty)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i: int) -> frozenset[int]:
        return self.sets[i]

    @cached_property
    def membership(self) -> tuple[tuple[int, ...], ...]:
        """For each point, the ascending indices of the elements containing it."""
        mem: list[list[int]] = [[] for _ in range(self.n_points)]
        for i, s in enumerate(self.sets):
            for x in s:
                mem[x].append(i)
        return tuple(tuple(m) for m in mem)

    def multiplicity(self, x: int) -> int:
        """Number of elements containing x (duplicates counted per index)."""
        self._check_point(x)
        return len(self.membership[x])

    def max_multiplicity(self) -> int:
        return max(len(m) for m in self.membership)

    def has_empty_elements(self) -> bool:
        return any(not s for s in self.sets)

    def normalize(self) -> "Cover":
        """Drop duplicate elements and elements strictly contained in another.

        Keeps first occurrences, preserving index order of the survivors.
        """
        keep = []
        for i, s in enumerate(self.sets):
            redundant = False
            for j, t in enumerate(self.sets):
                if j == i:
                    continue
                if s < t or (s == t and j < i):
                    redundant = True
                    break
            if not redundant:
                keep.append(s)
        return Cover(tuple(keep), self.n_points, self.allow_empty)

    def _check_point(self, x: int):
        if not isinstance(x, int) or not (0 <= x < self.n_points):
            raise InputError(f"unknown point {x!r}")


@dataclass(frozen=True)
class FiniteCoarseSpace:
    """A finite point set 0..n-1 with a gauge cover fixing the base scale."""

    n_points: int
    gauge: Cover

    def __post_init__(self):
        if self.gauge.n_points != self.n_points:
            raise InputError("gauge is defined over a different point set")
        if self.gauge.has_empty_elements():
            raise InputError("gauge must not contain empty elements")

    @property
    def points(self) -> range:
        return range(self.n_points)

    @cached_property
    def chain(self) -> "ChainGraph":
        return chain_graph(self.gauge)


@dataclass(frozen=True)
class ChainGraph:
    """x ~ y when some element of the generating cover contains both (reflexive)."""

    neighbors: tuple[tuple[int, ...], ...]

    @property
    def n_points(self) -> int:
        return len(self.neighbors)

    def adjacent(self, x: int, y: int) -> bool:
        return y in self.neighbors[x]

    def distances_from(self, sources: Iterable[int]) -> list[int | None]:
        """Multi-source BFS distance to the nearest source; None where unreachable."""
        dist: list[int | None] = [None] * self.n_points
        queue: deque[int] = deque()
        for s in sorted(set(sources)):
            if dist[s] is None:
                dist[s] = 0
                queue.append(s)
        while queue:
            x = queue.popleft()
            d = dist[x] + 1
            for y in self.neighbors[x]:
                if dist[y] is None:
                    dist[y] = d
                    queue.append(y)
        return dist

    def is_connected(self) -> bool:
        return all(d is not None for d in self.distances_from([0]))


def chain_graph(cover: Cover) -> ChainGraph:
    nbrs: list[set[int]] = [{x} for x in range(cover.n_points)]
    for s in cover.sets:
        for x in s:
            nbrs[x].update(s)
    return ChainGraph(tuple(tuple(sorted(v)) for v in nbrs))


@dataclass(frozen=True)
class RefinementCheck:
    """Outcome of a refinement test.

    On success, ``assignment[t]`` is the least coarse index whose element
    contains fine element t.  On failure, ``counterexample`` is the index of
    a fine element contained in no coarse element.
    """

    ok: bool
    assignment: tuple[int, ...] | None
    counterexample: int | None


def is_refinement(fine: Cover, coarse: Cover) -> RefinementCheck:
    """Check that every element of ``fine`` is contained in an element of ``coarse``."""
    if fine.n_points != coarse.n_points:
        raise InputError("covers are over different point sets")
    assignment = []
    for t, s in enumerate(fine.sets):
        found = None
        if not s:
            found = 0  # the empty set sits inside everything; least index by convention
        else:
            x0 = min(s)
            for j in coarse.membership[x0]:
                if s <= coarse.sets[j]:
                    found = j
                    break
        if found is None:
            return RefinementCheck(False, None, t)
        assignment.append(found)
    return RefinementCheck(True, tuple(assignment), None)


def star_set(points: Iterable[int], cover: Cover) -> frozenset[int]:
    """Union of all cover elements meeting the given set."""
    seen_elems: set[int] = set()
    out: set[int] = set()
    for a in points:
        cover._check_point(a)
        for i in cover.membership[a]:
            if i not in seen_elems:
                seen_elems.add(i)
                out |= cover.sets[i]
    return frozenset(out)


def iterated_star_set(points: Iterable[int], cover: Cover, k: int) -> frozenset[int]:
    """k-fold star of a point set: the chain ball of radius k around it."""
    if k < 0:
        raise InputError("star iteration count must be nonnegative")
    current = frozenset(points)
    for _ in range(k):
        current = star_set(current, cover)
    return current


def star_cover(cover: Cover, against: Cover) -> Cover:
    """Element-wise star: each element replaced by its star in ``against``.

    Index set and order of ``cover`` are preserved.
    """
    if cover.n_points != against.n_points:
        raise InputError("covers are over different point sets")
    return Cover(tuple(star_set(s, against) for s in cover.sets),
                 cover.n_points, cover.allow_empty)


def iterated_star(cover: Cover, k: int) -> Cover:
    """k-fold star iterate of a cover against itself.

    Level 0 is the cover itself; each level stars every element once more, so
    level k holds the chain balls of radius k around the original elements.
    Index set of the result equals the index set of the input.
    """
    if k < 0:
        raise InputError("star iteration count must be nonnegative")
    if k == 0:
        return cover
    current: list[set[int]] = [set(s) for s in cover.sets]
    frontier: list[set[int]] = [set(s) for s in cover.sets]
    used_elems: list[set[int]] = [set() for _ in cover.sets]
    for _ in range(k):
        for idx in range(len(current)):
            if not frontier[idx]:
                continue
            grown: set[int] = set()
            for x in frontier[idx]:
                for e in cover.membership[x]:
                    if e not in used_elems[idx]:
                        used_elems[idx].add(e)
                        grown |= cover.sets[e]
            new_points = grown - current[idx]
            current[idx] |= new_points
            frontier[idx] = new_points
    return Cover(tuple(frozenset(s) for s in current), cover.n_points, cover.allow_empty)


def chain_index(cover: Cover, x: int, region: Iterable[int]) -> ExtNat:
    """Length of the shortest chain from x to a point outside ``region``.

    Zero when x is already outside; infinite when the complement is
    unreachable in the chain graph of ``cover``.
    """
    cover._check_point(x)
    inside = frozenset(region)
    if x not in inside:
        return ExtNat(0)
    graph = chain_graph(cover)
    seen = {x}
    queue = deque([x])
    depth = {x: 0}
    while queue:
        p = queue.popleft()
        d = depth[p] + 1
        for y in graph.neighbors[p]:
            if y not in seen:
                if y not in inside:
                    return ExtNat(d)
                seen.add(y)
                depth[y] = d
                queue.append(y)
    return INFINITY


def chain_diameter(points: Iterable[int], cover: Cover) -> ExtNat:
    """Largest chain-graph distance between two points of the set (0 for <=1 point)."""
    graph = chain_graph(cover)
    return diameter_in_graph(points, graph)


def diameter_in_graph(points: Iterable[int], graph: ChainGraph) -> ExtNat:
    pts = sorted(set(points))
    if len(pts) < 2:
        return ExtNat(0)
    best = 0
    for a in pts:
        dist = graph.distances_from([a])
        for b in pts:
            d = dist[b]
            if d is None:
                return INFINITY
            if d > best:
                best = d
    return ExtNat(best)


@dataclass(frozen=True)
class BoundednessCertificate:
    """Largest element diameter against a declared budget.

    ``max_diameter`` is an ExtNat for chain diameters and a Fraction for
    metric diameters; ``witness`` is the least element index attaining it.
    """

    bound: object
    max_diameter: object
    witness: int | None
    ok: bool


def is_uniformly_bounded(cover: Cover, space: FiniteCoarseSpace, bound: int) -> BoundednessCertificate:
    """Check every element has chain diameter <= bound in the gauge's chain graph."""
    if cover.n_points != space.n_points:
        raise InputError("cover is over a different point set than the space")
    graph = space.chain
    worst: ExtNat = ExtNat(0)
    witness = None
    for i, s in enumerate(cover.sets):
        d = diameter_in_graph(s, graph)
        if worst < d:
            worst = d
            witness = i
        if not d.is_finite:
            break
    return BoundednessCertificate(bound, worst, witness, worst <= bound)


def shrink_with_multiplicity(fine: Cover, coarse: Cover) -> Cover:
    """Shrink ``coarse`` without pushing multiplicity above that of ``fine``.

    Requires ``fine`` to refine ``coarse``.  The result W keeps coarse's index
    set: W_s collects the fine elements whose least containing coarse index is
    s, plus every x in coarse_s whose coarse multiplicity does not exceed its
    fine multiplicity.  W shrinks coarse, coarsens fine, and satisfies
    m_W(x) <= m_fine(x) at every point.  Empty members are retained.
    """
    check = is_refinement(fine, coarse)
    if not check.ok:
        raise PreconditionError(
            f"fine element {check.counterexample} is contained in no coarse element",
            witness=fine.sets[check.counterexample],
        )
    base: list[set[int]] = [set() for _ in coarse.sets]
    for t, j in enumerate(check.assignment):
        base[j] |= fine.sets[t]
    for s, vs in enumerate(coarse.sets):
        for x in vs:
            if coarse.multiplicity(x) <= fine.multiplicity(x):
                base[s].add(x)
    return Cover(tuple(frozenset(b) for b in base), coarse.n_points, allow_empty=True)
