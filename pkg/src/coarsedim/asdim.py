"""Asymptotic-dimension certificates at fixed scale and the skeleton-filler pipeline.

The constructive direction builds a certified map into an n-dimensional nerve
from a caller-supplied witness cover; the reverse direction trims a certified
map's star preimages back to a witness cover.  The filler blends a retracted
copy of the input map with a freshly built nerve map, with every inequality
checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .covers import (
    Cover,
    FiniteCoarseSpace,
    chain_graph,
    diameter_in_graph,
    is_refinement,
    iterated_star,
    iterated_star_set,
    shrink_with_multiplicity,
    star_cover,
)
from .errors import ConstructionError, InputError, PreconditionError
from .extnat import INFINITY, ExtNat
from .pou import (
    BarycentricPoint,
    PartitionOfUnity,
    PUCertificate,
    barycentric_map,
    certify_pu,
    l1_distance,
)


@dataclass(frozen=True)
class AsdimPairCertificate:
    """Per-element counts of how many witness elements each cover element meets."""

    n: int
    counts: tuple[int, ...]
    ok: bool
    worst_index: int | None

    @property
    def max_count(self) -> int:
        return max(self.counts) if self.counts else 0


def check_asdim_pair(cover: Cover, witness: Cover, n: int) -> AsdimPairCertificate:
    """Pass iff every element of ``cover`` meets at most n+1 elements of ``witness``."""
    if cover.n_points != witness.n_points:
        raise InputError("covers are over different point sets")
    counts = []
    for s in cover.sets:
        met: set[int] = set()
        for x in s:
            met.update(witness.membership[x])
        counts.append(len(met))
    worst = None
    if counts:
        mx = max(counts)
        worst = counts.index(mx)
    return AsdimPairCertificate(n, tuple(counts), all(c <= n + 1 for c in counts), worst)


BRUTE_FORCE_POINT_LIMIT = 12


def find_witness_bruteforce(space: FiniteCoarseSpace, cover: Cover, n: int,
                            diameter: int) -> Cover | None:
    """Exhaustively search gauge-ball covers for an asymptotic-dimension witness.

    Candidates are the distinct chain-metric balls of the gauge with diameter
    at most ``diameter``, enumerated by (radius, center).  Returns the first
    covering family in which every element of ``cover`` meets at most n+1
    members, or None when the family admits no such witness.  A None result
    refutes nothing beyond this candidate family and budget.
    """
    npts = space.n_points
    if npts > BRUTE_FORCE_POINT_LIMIT:
        raise InputError(
            f"brute-force witness search is limited to {BRUTE_FORCE_POINT_LIMIT} points")
    if cover.n_points != npts:
        raise InputError("cover is over a different point set than the space")
    graph = space.chain
    dist = [graph.distances_from([c]) for c in range(npts)]

    balls: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for r in range(diameter + 1):
        for c in range(npts):
            ball = frozenset(y for y in range(npts)
                             if dist[c][y] is not None and dist[c][y] <= r)
            if ball in seen:
                continue
            seen.add(ball)
            diam = diameter_in_graph(ball, graph)
            if diam <= diameter:
                balls.append(ball)

    meets = [[bool(ball & s) for ball in balls] for s in cover.sets]
    counts = [0] * len(cover.sets)
    chosen: list[int] = []
    covered = [False] * npts

    def search() -> bool:
        target = next((x for x in range(npts) if not covered[x]), None)
        if target is None:
            return True
        for bi, ball in enumerate(balls):
            if target not in ball:
                continue
            bumped = [t for t in range(len(cover.sets)) if meets[t][bi]]
            if any(counts[t] + 1 > n + 1 for t in bumped):
                continue
            for t in bumped:
                counts[t] += 1
            newly = [x for x in ball if not covered[x]]
            for x in newly:
                covered[x] = True
            chosen.append(bi)
            if search():
                return True
            chosen.pop()
            for x in newly:
                covered[x] = False
            for t in bumped:
                counts[t] -= 1
        return False

    if search():
        witness = Cover(tuple(balls[bi] for bi in chosen), npts)
        final = check_asdim_pair(cover, witness, n)
        if not final.ok:
            raise ConstructionError("search invariant broken: chosen family fails its own count")
        return witness
    return None


@dataclass(frozen=True)
class SkeletonResult:
    """Outcome of the witness-to-nerve-map construction."""

    pu: PartitionOfUnity
    certificate: PUCertificate
    cover: Cover                       # the starred witness the map points into
    precondition: AsdimPairCertificate


def build_skeleton_pu(space: FiniteCoarseSpace, cover: Cover, witness: Cover,
                      k: int, n: int, diameter_bound: int) -> SkeletonResult:
    """Build a certified map into an n-dimensional nerve from a witness cover.

    Requires every element of the (k+1)-fold star of ``cover`` to meet at most
    n+1 elements of ``witness``.  The target family stars the witness against
    the k-fold star of ``cover``; its multiplicity is checked to stay at most
    n+1, so the nerve capped at dimension n holds every carrier.  The returned
    certificate is taken at bound (2n+2)^2 / k.
    """
    if k < 1:
        raise InputError("star scale k must be at least 1")
    if n < 0:
        raise InputError("dimension n must be nonnegative")
    pre = check_asdim_pair(iterated_star(cover, k + 1), witness, n)
    if not pre.ok:
        raise PreconditionError(
            f"element {pre.worst_index} of the (k+1)-fold star meets "
            f"{pre.max_count} witness elements (allowed {n + 1})",
            witness=pre,
        )
    target = star_cover(witness, iterated_star(cover, k))
    mult = target.max_multiplicity()
    if mult > n + 1:
        worst = next(x for x in range(target.n_points)
                     if target.multiplicity(x) > n + 1)
        raise ConstructionError(
            f"starred witness has multiplicity {mult} > {n + 1} at point {worst}")
    pu = barycentric_map(cover, target, d_cap=n)
    eps = Fraction((2 * n + 2) ** 2, k)
    cert = certify_pu(pu, cover, space, eps, diameter_bound)
    return SkeletonResult(pu, cert, target, pre)


@dataclass(frozen=True)
class TrimResult:
    cover: Cover
    certificate: AsdimPairCertificate


def trim_to_cover(f: PartitionOfUnity, cover: Cover, n: int | None = None) -> TrimResult:
    """Trim the star preimages of f to a witness cover for ``cover``.

    Requires the star preimages to coarsen the 2-fold star of ``cover`` and to
    have pointwise multiplicity at most n+1 (n defaults to the largest carrier
    size minus one).  Each preimage loses the union of all ``cover`` elements
    meeting its complement; the result still coarsens ``cover`` and passes the
    n-count check against it.
    """
    if not f.is_total:
        raise InputError("trimming needs a total assignment")
    if cover.n_points != f.n_points:
        raise InputError("cover is over a different point set than the assignment")
    if n is None:
        n = f.max_carrier_size() - 1
    if f.max_carrier_size() > n + 1:
        worst = next(x for x in sorted(f.values) if len(f.values[x].carrier) > n + 1)
        raise PreconditionError(
            f"carrier at point {worst} has {len(f.values[worst].carrier)} vertices "
            f"(allowed {n + 1})", witness=worst)
    preimages = f.star_preimage_cover()
    twice = iterated_star(cover, 2)
    ref = is_refinement(twice, preimages)
    if not ref.ok:
        raise PreconditionError(
            f"2-fold star element {ref.counterexample} fits in no star preimage",
            witness=twice.sets[ref.counterexample])

    all_points = frozenset(range(cover.n_points))
    trimmed = []
    for s in preimages.sets:
        outside = all_points - s
        removal: set[int] = set()
        for x in outside:
            for e in cover.membership[x]:
                removal |= cover.sets[e]
        trimmed.append(s - removal)
    result = Cover(tuple(trimmed), cover.n_points, allow_empty=True)

    back = is_refinement(cover, result)
    if not back.ok:
        raise ConstructionError("trimmed family no longer coarsens the input cover")
    cert = check_asdim_pair(cover, result, n)
    if not cert.ok:
        raise ConstructionError("trimmed family fails the intersection count check")
    return TrimResult(result, cert)


@dataclass(frozen=True)
class FillerParams:
    """Scale parameters for the filler, all four budget terms below the cap.

    The cap is min(eps, 1/(n+1))/4 and the terms are (2m+1)*delta, 3/m,
    2(2n+2)^2/k and 3/m again.
    """

    eps: Fraction
    n: int
    k: int
    m: int
    delta: Fraction

    def __post_init__(self):
        if self.eps <= 0 or self.n < 0 or self.delta <= 0:
            raise InputError("need eps > 0, n >= 0, delta > 0")
        if not self.k > self.m >= 1:
            raise InputError("need k > m >= 1")
        cap = self.budget_cap()
        for term in self.budget_terms():
            if not term < cap:
                raise InputError(f"budget term {term} is not below the cap {cap}")

    def budget_cap(self) -> Fraction:
        return min(self.eps, Fraction(1, self.n + 1)) / 4

    def budget_terms(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (
            (2 * self.m + 1) * self.delta,
            Fraction(3, self.m),
            Fraction(2 * (2 * self.n + 2) ** 2, self.k),
            Fraction(3, self.m),
        )

    def variation_budget(self) -> Fraction:
        return sum(self.budget_terms(), Fraction(0))


def choose_filler_params(eps, n: int) -> FillerParams:
    """Deterministic minimal parameter choice for the filler at bound eps.

    m is the least integer with 3/m below the cap, k the least integer above m
    with 2(2n+2)^2/k below the cap, and delta is half the cap divided by 2m+1.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    if n < 0:
        raise InputError("n must be nonnegative")
    cap = min(eps, Fraction(1, n + 1)) / 4
    m = int(3 / cap) + 1
    k = max(m + 1, int(Fraction(2 * (2 * n + 2) ** 2) / cap) + 1)
    delta = cap / (2 * (2 * m + 1))
    return FillerParams(eps=eps, n=n, k=k, m=m, delta=delta)


class BlendCase(Enum):
    """Which of the two chain indices behind a blend value were infinite."""

    BOTH_FINITE = "both-finite"
    BOTH_INFINITE = "both-infinite"
    STAR_INFINITE = "star-infinite"
    COMPLEMENT_INFINITE = "complement-infinite"


@dataclass(frozen=True)
class BlendFunction:
    """Pointwise blend coefficients in [0,1] with their index case records.

    ``star_index`` is the chain index of each point in the m-fold star of the
    subset; ``complement_index`` its chain index in the subset's complement.
    """

    values: tuple[Fraction, ...]
    cases: tuple[BlendCase, ...]
    star_index: tuple[ExtNat, ...]
    complement_index: tuple[ExtNat, ...]
    star_region: frozenset[int]
    m: int

    _CASE_TABLE = {
        (True, True): BlendCase.BOTH_FINITE,
        (False, False): BlendCase.BOTH_INFINITE,
        (False, True): BlendCase.STAR_INFINITE,
        (True, False): BlendCase.COMPLEMENT_INFINITE,
    }

    def __post_init__(self):
        for x, a in enumerate(self.values):
            if not 0 <= a <= 1:
                raise InputError(f"blend value {a} at point {x} outside [0, 1]")
            key = (self.star_index[x].is_finite, self.complement_index[x].is_finite)
            if self.cases[x] is not self._CASE_TABLE[key]:
                raise InputError(f"case record at point {x} disagrees with its indices")


def blend_alpha(subset, m: int, cover: Cover) -> BlendFunction:
    """Blend profile: 1 deep inside the subset, 0 outside its m-fold star.

    The value at x is p/(p+q) where p is x's chain index in the m-fold star of
    the subset and q its chain index in the subset's complement; infinite
    indices follow the four-way case table (1/2, 1, 0).
    """
    n = cover.n_points
    region = frozenset(subset)
    if not region:
        raise InputError("the subset must be nonempty")
    if len(region) == n:
        raise InputError("the subset must be a proper subset")
    if m < 1:
        raise InputError("star depth m must be at least 1")
    star_m = iterated_star_set(region, cover, m)
    graph = chain_graph(cover)
    outside_star = [x for x in range(n) if x not in star_m]
    p_raw = graph.distances_from(outside_star) if outside_star else [None] * n
    q_raw = graph.distances_from(sorted(region))

    values: list[Fraction] = []
    cases: list[BlendCase] = []
    for x in range(n):
        p, q = p_raw[x], q_raw[x]
        if p is None and q is None:
            values.append(Fraction(1, 2))
            cases.append(BlendCase.BOTH_INFINITE)
        elif p is None:
            values.append(Fraction(1))
            cases.append(BlendCase.STAR_INFINITE)
        elif q is None:
            values.append(Fraction(0))
            cases.append(BlendCase.COMPLEMENT_INFINITE)
        else:
            values.append(Fraction(p, p + q) if p + q else Fraction(0))
            cases.append(BlendCase.BOTH_FINITE)
    return BlendFunction(
        values=tuple(values),
        cases=tuple(cases),
        star_index=tuple(ExtNat(p) if p is not None else INFINITY for p in p_raw),
        complement_index=tuple(ExtNat(q) if q is not None else INFINITY for q in q_raw),
        star_region=star_m,
        m=m,
    )


@dataclass(frozen=True)
class RetractResult:
    """A partial map made skeletal near the anchor set, plus bookkeeping."""

    pu: PartitionOfUnity                 # defined on the m-fold star of the anchors
    anchors: dict[int, int]              # point -> nearest anchor (least id tie-break)
    max_shift: Fraction                  # largest l1 move applied to any value
    shift_bound: Fraction                # m * delta, the expected ceiling for the shift


def skeletal_retract(f: PartitionOfUnity, subset, m: int, cover: Cover,
                     delta: Fraction, n: int) -> RetractResult:
    """Push f onto the carriers of its nearest anchor values over the subset's m-star.

    Each point x in the m-fold star gets the anchor c(x): the endpoint in the
    subset of a shortest chain (least id on ties, c(x)=x on the subset).  All
    weight of f(x) outside the carrier of f(c(x)) moves onto one common
    carrier vertex: the common vertex of largest weight at the anchor, least
    id on ties.  Values over the subset must use at most n+1 vertices, and
    m*delta must stay below 1/(8(n+1)) so the two carriers share a vertex.
    """
    delta = Fraction(delta)
    region = frozenset(subset)
    if not region:
        raise InputError("the anchor subset must be nonempty")
    if not f.is_total:
        raise InputError("the retract needs a total assignment")
    if m < 1:
        raise InputError("star depth m must be at least 1")
    if not m * delta < Fraction(1, 8 * (n + 1)):
        raise PreconditionError(
            f"m*delta = {m * delta} is not below 1/{8 * (n + 1)}")
    for a in sorted(region):
        if len(f.value(a).carrier) > n + 1:
            raise PreconditionError(
                f"value at anchor {a} uses {len(f.value(a).carrier)} vertices "
                f"(allowed {n + 1})", witness=a)

    star_m = iterated_star_set(region, cover, m)
    graph = chain_graph(cover)
    anchor_of = _nearest_anchor(graph, sorted(region))

    values: dict[int, BarycentricPoint] = {}
    anchors: dict[int, int] = {}
    max_shift = Fraction(0)
    for x in sorted(star_m):
        c = x if x in region else anchor_of[x]
        if c is None:
            raise ConstructionError(f"point {x} in the star region has no reachable anchor")
        anchors[x] = c
        fx = f.value(x)
        fc_carrier = f.value(c).carrier
        if fx.carrier <= fc_carrier:
            values[x] = fx
            continue
        common = fx.carrier & fc_carrier
        if not common:
            raise PreconditionError(
                f"carriers at point {x} and its anchor {c} are disjoint", witness=x)
        fc = f.value(c)
        target = sorted(common, key=lambda v: (-fc.weights[v], v))[0]
        moved = Fraction(0)
        kept = {}
        for v, w in fx.weights.items():
            if v in fc_carrier:
                kept[v] = w
            else:
                moved += w
        kept[target] = kept.get(target, Fraction(0)) + moved
        gx = BarycentricPoint(kept)
        values[x] = gx
        shift = l1_distance(gx, fx)
        if shift != 2 * moved:
            raise ConstructionError("retract moved a different mass than it removed")
        if shift > max_shift:
            max_shift = shift
    pu = PartitionOfUnity(values, f.n_points, f.vertices, f.complex)
    return RetractResult(pu, anchors, max_shift, m * delta)


def _nearest_anchor(graph, sources: list[int]) -> list[int | None]:
    """Per point, the least-id source among those at minimal chain distance."""
    n = graph.n_points
    root: list[int | None] = [None] * n
    for s in sources:
        root[s] = s
    layer = list(sources)
    while layer:
        proposals: dict[int, int] = {}
        for x in layer:
            r = root[x]
            for y in graph.neighbors[x]:
                if root[y] is None:
                    old = proposals.get(y)
                    if old is None or r < old:
                        proposals[y] = r
        for y, r in proposals.items():
            root[y] = r
        layer = sorted(proposals)
    return root


@dataclass(frozen=True)
class FillerResult:
    """The blended map with its certificate and every measured quantity."""

    pu: PartitionOfUnity
    certificate: PUCertificate           # at bound min(eps, 1/(n+1))
    input_certificate: PUCertificate     # f against the coarse cover at delta
    alpha: BlendFunction
    retract: RetractResult
    shrunk_cover: Cover
    nerve_map: PartitionOfUnity
    budget: Fraction
    measured_variation: Fraction
    budget_ok: bool
    max_deviation_on_anchors: Fraction   # largest l1 gap between the result and the retract on the subset
    max_carrier_size: int
    min_peak_weight: Fraction            # smallest over points of the largest coordinate


def filler(space: FiniteCoarseSpace, f: PartitionOfUnity, subset, cover: Cover,
           coarse: Cover, params: FillerParams, diameter_bound: int) -> FillerResult:
    """Blend a skeletal retract of f with a nerve map into a certified result.

    Gates: f certifies against ``coarse`` at bound delta; values over the
    subset are n-skeletal; ``coarse`` coarsens the k-fold star of ``cover``
    with multiplicity at most n+1.  The star preimages of f are then shrunk
    against ``coarse``, a nerve map is built on the shrunk family, and the
    blend is certified against ``cover`` at min(eps, 1/(n+1)).
    """
    n, m, k = params.n, params.m, params.k
    region = frozenset(subset)

    input_cert = certify_pu(f, coarse, space, params.delta, diameter_bound)
    if not input_cert.ok:
        raise PreconditionError(
            "input map does not certify against the coarse cover at delta",
            witness=input_cert)
    ref = is_refinement(iterated_star(cover, k), coarse)
    if not ref.ok:
        raise PreconditionError(
            f"k-fold star element {ref.counterexample} fits in no coarse element",
            witness=ref.counterexample)
    mult = coarse.max_multiplicity()
    if mult > n + 1:
        raise PreconditionError(f"coarse cover has multiplicity {mult} > {n + 1}")

    alpha = blend_alpha(region, m, cover)
    retract = skeletal_retract(f, region, m, cover, params.delta, n)
    shrunk = shrink_with_multiplicity(coarse, f.star_preimage_cover())
    nerve_map = barycentric_map(cover, shrunk, d_cap=max(shrunk.max_multiplicity(), 1) - 1)

    # the shrunk family sits inside the star preimages, so the nerve map's
    # carriers are faces of the input map's carriers
    relabeled: dict[int, BarycentricPoint] = {}
    for x in range(space.n_points):
        bp = nerve_map.values[x]
        weights = {f.vertices[s]: w for s, w in bp.weights.items()}
        relabeled[x] = BarycentricPoint(weights)
        if not relabeled[x].carrier <= f.value(x).carrier:
            raise ConstructionError(
                f"nerve map carrier at point {x} escapes the input carrier")
    phi = PartitionOfUnity(relabeled, space.n_points, f.vertices, f.complex)

    values: dict[int, BarycentricPoint] = {}
    for x in range(space.n_points):
        a = alpha.values[x]
        if a == 0:
            values[x] = phi.values[x]
        elif a == 1:
            values[x] = retract.pu.values[x]
        else:
            values[x] = retract.pu.values[x].blend(phi.values[x], a)
    blended = PartitionOfUnity(values, space.n_points, f.vertices, f.complex)

    strict = min(params.eps, Fraction(1, n + 1))
    cert = certify_pu(blended, cover, space, strict, diameter_bound)
    budget = params.variation_budget()
    measured = cert.variation_value

    deviation = Fraction(0)
    for x in sorted(region):
        gap = l1_distance(blended.values[x], retract.pu.values[x])
        if gap > deviation:
            deviation = gap
    peaks = [max(bp.weights.values()) for bp in values.values()]
    return FillerResult(
        pu=blended,
        certificate=cert,
        input_certificate=input_cert,
        alpha=alpha,
        retract=retract,
        shrunk_cover=shrunk,
        nerve_map=phi,
        budget=budget,
        measured_variation=measured,
        budget_ok=measured <= budget,
        max_deviation_on_anchors=deviation,
        max_carrier_size=blended.max_carrier_size(),
        min_peak_weight=min(peaks),
    )
