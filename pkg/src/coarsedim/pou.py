"""Barycentric points, nerves of covers, and partition-of-unity certification.

All weights are exact rationals; every certified inequality below is a
decidable comparison of Fractions, with witnesses for failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covers import (
    BoundednessCertificate,
    Cover,
    FiniteCoarseSpace,
    chain_graph,
    is_uniformly_bounded,
)
from .errors import ConstructionError, InputError


class BarycentricPoint:
    """Finitely supported nonnegative rational weights summing to exactly 1."""

    __slots__ = ("weights", "_carrier")

    def __init__(self, weights):
        clean: dict[int, Fraction] = {}
        total = Fraction(0)
        for v, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise InputError(f"negative weight {w} at vertex {v}")
            if w:
                clean[int(v)] = w
                total += w
        if total != 1:
            raise InputError(f"weights sum to {total}, need exactly 1")
        self.weights = clean
        self._carrier = None

    @classmethod
    def vertex(cls, v: int) -> "BarycentricPoint":
        return cls({v: Fraction(1)})

    @property
    def carrier(self) -> frozenset[int]:
        if self._carrier is None:
            self._carrier = frozenset(self.weights)
        return self._carrier

    def weight(self, v: int) -> Fraction:
        return self.weights.get(v, Fraction(0))

    def key(self) -> tuple:
        """Canonical hashable form (used to group equal values)."""
        return tuple(sorted(self.weights.items()))

    def blend(self, other: "BarycentricPoint", alpha: Fraction) -> "BarycentricPoint":
        """Convex combination alpha*self + (1-alpha)*other."""
        alpha = Fraction(alpha)
        if not 0 <= alpha <= 1:
            raise InputError(f"blend coefficient {alpha} outside [0, 1]")
        if alpha == 1:
            return self
        if alpha == 0:
            return other
        out = {v: alpha * w for v, w in self.weights.items()}
        beta = 1 - alpha
        for v, w in other.weights.items():
            out[v] = out.get(v, Fraction(0)) + beta * w
        return BarycentricPoint(out)

    def __eq__(self, other):
        if isinstance(other, BarycentricPoint):
            return self.weights == other.weights
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        inner = ", ".join(f"{v}: {w}" for v, w in sorted(self.weights.items()))
        return f"BarycentricPoint({{{inner}}})"


def l1_distance(a: BarycentricPoint, b: BarycentricPoint) -> Fraction:
    """Exact l1 distance between two barycentric points over a shared vertex universe."""
    total = Fraction(0)
    for v in a.carrier | b.carrier:
        total += abs(a.weight(v) - b.weight(v))
    return total


@dataclass(frozen=True)
class SimplicialComplex:
    """A downward-closed family of vertex subsets with a dimension cap.

    The family is stored by its facets (the maximal members, with no cap
    applied); a subset is a simplex when it fits inside a facet and respects
    the cap.  Downward closure is automatic in this encoding.  The ambient
    vertex set may be larger than the set of vertices spanning simplices.
    """

    vertices: tuple[int, ...]
    facets: frozenset[frozenset[int]]
    d_cap: int

    def __post_init__(self):
        if self.d_cap < 0:
            raise InputError("dimension cap must be nonnegative")
        universe = set(self.vertices)
        for f in self.facets:
            if not f:
                raise InputError("facets must be nonempty")
            if not f <= universe:
                raise InputError(f"facet {sorted(f)} uses unknown vertices")
        for f in self.facets:
            if any(f < g for g in self.facets):
                raise InputError(f"facet {sorted(f)} is not maximal")

    def has(self, simplex) -> bool:
        s = frozenset(simplex)
        if not s or len(s) > self.d_cap + 1:
            return False
        return any(s <= f for f in self.facets)

    @property
    def dimension(self) -> int:
        if not self.facets:
            return -1
        return min(self.d_cap, max(len(f) for f in self.facets) - 1)

    def all_simplices(self, limit: int = 200000) -> frozenset[frozenset[int]]:
        """Explicit enumeration for small complexes (guarded against blowup)."""
        from itertools import combinations

        out: set[frozenset[int]] = set()
        for f in self.facets:
            top = min(len(f), self.d_cap + 1)
            for size in range(1, top + 1):
                for combo in combinations(sorted(f), size):
                    out.add(frozenset(combo))
                    if len(out) > limit:
                        raise InputError("complex too large for explicit enumeration")
        return frozenset(out)


def nerve(cover: Cover, d_cap: int) -> SimplicialComplex:
    """Nerve of a cover: index subsets spanning a simplex iff their elements all meet.

    A family of indices has a common point iff it sits inside the membership
    set of one of the points, so the facets are exactly the maximal membership
    sets; intersections are checked exactly through them.
    """
    if d_cap < 0:
        raise InputError("dimension cap must be nonnegative")
    distinct = {frozenset(cover.membership[x]) for x in range(cover.n_points)}
    facets = frozenset(f for f in distinct if not any(f < g for g in distinct))
    return SimplicialComplex(tuple(range(len(cover.sets))), facets, d_cap)


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """Assignment of a barycentric point to each point of the space.

    ``values`` may cover only part of the space (a partial map); most
    certification entry points require a total one.  When a target complex is
    attached, every carrier must be one of its simplices.
    """

    values: dict[int, BarycentricPoint]
    n_points: int
    vertices: tuple[int, ...]
    complex: SimplicialComplex | None = None

    def __post_init__(self):
        universe = set(self.vertices)
        for x, bp in self.values.items():
            if not (0 <= x < self.n_points):
                raise InputError(f"value assigned to unknown point {x}")
            if not bp.carrier <= universe:
                raise InputError(f"value at point {x} uses vertices outside the universe")
            if self.complex is not None and not self.complex.has(bp.carrier):
                raise InputError(f"carrier at point {x} is not a simplex of the target complex")

    def __eq__(self, other):
        if isinstance(other, PartitionOfUnity):
            return (self.values == other.values and self.n_points == other.n_points
                    and self.vertices == other.vertices)
        return NotImplemented

    @property
    def is_total(self) -> bool:
        return len(self.values) == self.n_points

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(sorted(self.values))

    def value(self, x: int) -> BarycentricPoint:
        try:
            return self.values[x]
        except KeyError:
            raise InputError(f"no value assigned to point {x}") from None

    def star_preimage(self, v: int) -> frozenset[int]:
        """Points whose value puts positive weight on vertex v."""
        if v not in set(self.vertices):
            raise InputError(f"unknown vertex {v}")
        return frozenset(x for x, bp in self.values.items() if v in bp.weights)

    def star_preimage_cover(self) -> Cover:
        """The family of all vertex-star preimages, indexed in vertex order."""
        if not self.is_total:
            raise InputError("star preimage cover needs a total assignment")
        return Cover(tuple(self.star_preimage(v) for v in self.vertices),
                     self.n_points, allow_empty=True)

    def max_carrier_size(self) -> int:
        return max(len(bp.carrier) for bp in self.values.values())


@dataclass(frozen=True)
class VariationResult:
    """Largest displacement over pairs lying in a single cover element."""

    value: Fraction
    pair: tuple[int, int] | None


def _variation_scan(keys: dict[int, object], cover: Cover, distance) -> VariationResult:
    """Max distance between value classes over within-element pairs.

    ``keys`` maps each relevant point to a hashable class key; points sharing
    a key share a value.  The witness is the lexicographically least attaining
    pair.  Pairs with a point missing from ``keys`` are skipped.
    """
    cache: dict[tuple, Fraction] = {}
    best = Fraction(0)
    best_pair: tuple[int, int] | None = None
    zero_pair: tuple[int, int] | None = None
    for s in cover.sets:
        pts = sorted(p for p in s if p in keys)
        if len(pts) < 2:
            continue
        if zero_pair is None or (pts[0], pts[1]) < zero_pair:
            zero_pair = (pts[0], pts[1])
        reps: dict[object, int] = {}
        for p in pts:
            k = keys[p]
            if k not in reps:
                reps[k] = p
        if len(reps) < 2:
            continue
        items = sorted(reps.items(), key=lambda kv: kv[1])
        for i in range(len(items)):
            ka, pa = items[i]
            for j in range(i + 1, len(items)):
                kb, pb = items[j]
                ck = (ka, kb)
                d = cache.get(ck)
                if d is None:
                    d = distance(ka, kb)
                    cache[ck] = d
                    cache[(kb, ka)] = d
                pair = (pa, pb) if pa < pb else (pb, pa)
                if d > best or (d == best and best > 0 and (best_pair is None or pair < best_pair)):
                    best = d
                    best_pair = pair
    if best == 0:
        best_pair = zero_pair
    return VariationResult(best, best_pair)


def variation(f: PartitionOfUnity, cover: Cover, partial: bool = False) -> VariationResult:
    """Largest l1 displacement of f over pairs contained in one cover element."""
    if cover.n_points != f.n_points:
        raise InputError("cover is over a different point set than the assignment")
    if not partial and not f.is_total:
        raise InputError("variation needs a total assignment")
    keys = {x: bp.key() for x, bp in f.values.items()}
    points = {k: BarycentricPoint(dict(k)) for k in set(keys.values())}

    def dist(ka, kb):
        return l1_distance(points[ka], points[kb])

    return _variation_scan(keys, cover, dist)


def scalar_variation(values, cover: Cover) -> VariationResult:
    """Variation of a rational-valued function given as a sequence over all points."""
    vals = [Fraction(v) for v in values]
    if len(vals) != cover.n_points:
        raise InputError("need one value per point")
    keys = {x: vals[x] for x in range(cover.n_points)}
    return _variation_scan(keys, cover, lambda a, b: abs(a - b))


def quotient_variation_bound(m, n) -> Fraction:
    """Certified variation bound (n+1)/m for a quotient p/q with p <= q, q >= m."""
    m = Fraction(m)
    if m <= 0:
        raise InputError("lower bound m must be positive")
    return (Fraction(n) + 1) / m


def barycentric_map(chain_cover: Cover, target_cover: Cover, d_cap: int | None = None) -> PartitionOfUnity:
    """The natural map to the nerve of ``target_cover`` driven by chain indices.

    For each point the weight on index s is the chain index of the point in
    element s, normalised by the total.  Where infinite indices occur, they
    absorb all mass in equal shares and finite indices get zero.  The result
    carries the nerve (capped at the largest multiplicity by default) and its
    carriers are verified against it.
    """
    if chain_cover.n_points != target_cover.n_points:
        raise InputError("covers are over different point sets")
    n = chain_cover.n_points
    graph = chain_graph(chain_cover)
    all_points = range(n)
    index_of_element: list[list[int | None]] = []
    for s in target_cover.sets:
        complement = [x for x in all_points if x not in s]
        # distance to the complement is exactly the chain index in s
        index_of_element.append(graph.distances_from(complement) if complement
                                else [None] * n)
    values: dict[int, BarycentricPoint] = {}
    n_elems = len(target_cover.sets)
    for x in all_points:
        infinite = [s for s in range(n_elems) if index_of_element[s][x] is None]
        if infinite:
            share = Fraction(1, len(infinite))
            values[x] = BarycentricPoint({s: share for s in infinite})
        else:
            total = 0
            for s in target_cover.membership[x]:
                total += index_of_element[s][x]
            if total <= 0:
                raise ConstructionError(f"point {x} has zero total index against a covering family")
            weights = {}
            for s in target_cover.membership[x]:
                ix = index_of_element[s][x]
                if ix:
                    weights[s] = Fraction(ix, total)
            values[x] = BarycentricPoint(weights)
    if d_cap is None:
        d_cap = max(target_cover.max_multiplicity(), 1) - 1
    complex_ = nerve(target_cover, d_cap)
    return PartitionOfUnity(values, n, tuple(range(n_elems)), complex_)


def coarsening_witnesses(f: PartitionOfUnity, cover: Cover):
    """Per element, the least vertex positive on all of it; None where there is none.

    Returns (witnesses, first_failing_index_or_None).  Empty elements pass
    vacuously with witness None.
    """
    witnesses: list[int | None] = []
    failure = None
    for i, s in enumerate(cover.sets):
        if not s:
            witnesses.append(None)
            continue
        pts = sorted(s)
        common = set(f.value(pts[0]).carrier)
        for p in pts[1:]:
            common &= f.value(p).carrier
            if not common:
                break
        if common:
            witnesses.append(min(common))
        else:
            witnesses.append(None)
            if failure is None:
                failure = i
    return tuple(witnesses), failure


@dataclass(frozen=True)
class PUCertificate:
    """Certificate for the three defining conditions of a certified partition of unity.

    (a) variation below the stated bound (vacuous when eps is None, meaning
    no bound), (b) every cover element carried entirely inside some vertex
    star, (c) star preimages uniformly bounded.
    """

    eps: Fraction | None
    variation_value: Fraction
    variation_pair: tuple[int, int] | None
    variation_ok: bool
    coarsening: tuple[int | None, ...]
    coarsening_ok: bool
    coarsening_failure: int | None
    boundedness: BoundednessCertificate
    ok: bool


def certify_pu(f: PartitionOfUnity, cover: Cover, space: FiniteCoarseSpace,
               eps: Fraction | None, diameter_bound: int) -> PUCertificate:
    """Certify f as a partition of unity against ``cover`` at bound ``eps``.

    ``eps=None`` means no variation bound.  Star preimage boundedness is chain
    diameter in the gauge of ``space`` against ``diameter_bound``.
    """
    if not f.is_total:
        raise InputError("certification needs a total assignment")
    var = variation(f, cover)
    var_ok = eps is None or var.value < eps
    witnesses, failing = coarsening_witnesses(f, cover)
    coarsen_ok = failing is None
    bcert = is_uniformly_bounded(f.star_preimage_cover(), space, diameter_bound)
    return PUCertificate(
        eps=None if eps is None else Fraction(eps),
        variation_value=var.value,
        variation_pair=var.pair,
        variation_ok=var_ok,
        coarsening=witnesses,
        coarsening_ok=coarsen_ok,
        coarsening_failure=failing,
        boundedness=bcert,
        ok=var_ok and coarsen_ok and bcert.ok,
    )
