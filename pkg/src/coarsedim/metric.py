"""Finite metric spaces, ball covers, and the bridge between metric and
cover-based partition-of-unity certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covers import BoundednessCertificate, Cover
from .errors import InputError, PreconditionError
from .pou import PartitionOfUnity, PUCertificate, coarsening_witnesses, l1_distance, variation

TRIANGLE_CHECK_LIMIT = 150


@dataclass(frozen=True, init=False)
class FiniteMetricSpace:
    """Points 0..n-1 with exact rational distances.

    The triangle inequality is verified on construction for spaces up to
    TRIANGLE_CHECK_LIMIT points (O(n^3)); pass ``check_triangle`` to force or
    skip the check.
    """

    n_points: int
    dist: tuple[tuple[Fraction, ...], ...]

    def __init__(self, n_points, dist, check_triangle: bool | None = None):
        rows = tuple(tuple(Fraction(d) for d in row) for row in dist)
        if len(rows) != n_points or any(len(r) != n_points for r in rows):
            raise InputError("distance matrix shape does not match the point count")
        for i in range(n_points):
            if rows[i][i] != 0:
                raise InputError(f"nonzero self-distance at point {i}")
            for j in range(i + 1, n_points):
                if rows[i][j] != rows[j][i]:
                    raise InputError(f"asymmetric distance between {i} and {j}")
                if rows[i][j] < 0:
                    raise InputError(f"negative distance between {i} and {j}")
        if check_triangle is None:
            check_triangle = n_points <= TRIANGLE_CHECK_LIMIT
        if check_triangle:
            for i in range(n_points):
                for j in range(n_points):
                    dij = rows[i][j]
                    for k in range(n_points):
                        if dij > rows[i][k] + rows[k][j]:
                            raise InputError(
                                f"triangle inequality fails on ({i}, {j}, {k})")
        object.__setattr__(self, "n_points", n_points)
        object.__setattr__(self, "dist", rows)

    @classmethod
    def line(cls, n: int) -> "FiniteMetricSpace":
        """0..n-1 with unit spacing."""
        rows = [[Fraction(abs(i - j)) for j in range(n)] for i in range(n)]
        return cls(n, rows, check_triangle=False)

    @classmethod
    def from_l1_points(cls, coords) -> "FiniteMetricSpace":
        pts = [tuple(Fraction(c) for c in p) for p in coords]
        n = len(pts)
        rows = [[sum(abs(a - b) for a, b in zip(pts[i], pts[j]))
                 for j in range(n)] for i in range(n)]
        return cls(n, rows, check_triangle=False)

    def d(self, x: int, y: int) -> Fraction:
        if not (0 <= x < self.n_points and 0 <= y < self.n_points):
            raise InputError(f"unknown point in pair ({x}, {y})")
        return self.dist[x][y]

    def set_diameter(self, points) -> Fraction:
        pts = sorted(set(points))
        best = Fraction(0)
        for i, a in enumerate(pts):
            for b in pts[i + 1:]:
                if self.dist[a][b] > best:
                    best = self.dist[a][b]
        return best


def ball_cover(metric: FiniteMetricSpace, radius) -> Cover:
    """One closed ball per point, indexed by its center."""
    radius = Fraction(radius)
    if radius <= 0:
        raise InputError("radius must be positive")
    n = metric.n_points
    sets = tuple(frozenset(y for y in range(n) if metric.dist[c][y] <= radius)
                 for c in range(n))
    return Cover(sets, n)


@dataclass(frozen=True)
class DeltaPUCertificate:
    """Certificate for the metric notion of a certified partition of unity.

    (i) l1 displacement at most delta*d + delta on every pair, (ii) every pair
    closer than 1/delta shares a star preimage, (iii) star preimages have
    metric diameter at most the declared bound.
    """

    delta: Fraction
    lipschitz_ok: bool
    lipschitz_pair: tuple[int, int] | None
    lipschitz_value: Fraction
    lipschitz_allowance: Fraction
    lebesgue_ok: bool
    lebesgue_pair: tuple[int, int] | None
    boundedness: BoundednessCertificate
    ok: bool


def _metric_boundedness(f: PartitionOfUnity, metric: FiniteMetricSpace,
                        bound: Fraction) -> BoundednessCertificate:
    worst = Fraction(0)
    witness = None
    for i, v in enumerate(f.vertices):
        diam = metric.set_diameter(f.star_preimage(v))
        if diam > worst:
            worst = diam
            witness = i
    return BoundednessCertificate(bound, worst, witness, worst <= bound)


def certify_delta_pu(f: PartitionOfUnity, metric: FiniteMetricSpace, delta,
                     diameter_bound) -> DeltaPUCertificate:
    delta = Fraction(delta)
    diameter_bound = Fraction(diameter_bound)
    if delta <= 0:
        raise InputError("delta must be positive")
    if not f.is_total or f.n_points != metric.n_points:
        raise InputError("the assignment must be total over the metric space")
    lip_ok = True
    lip_pair = None
    lip_value = Fraction(0)
    lip_allow = delta
    worst_margin = None
    leb_ok = True
    leb_pair = None
    threshold = 1 / delta
    for x in range(metric.n_points):
        fx = f.values[x]
        for y in range(x + 1, metric.n_points):
            d = metric.dist[x][y]
            gap = l1_distance(fx, f.values[y])
            allowance = delta * d + delta
            margin = gap - allowance
            if worst_margin is None or margin > worst_margin:
                worst_margin = margin
                lip_pair = (x, y)
                lip_value = gap
                lip_allow = allowance
            if gap > allowance:
                lip_ok = False
            if d < threshold and leb_ok:
                if not (fx.carrier & f.values[y].carrier):
                    leb_ok = False
                    leb_pair = (x, y)
    bcert = _metric_boundedness(f, metric, diameter_bound)
    return DeltaPUCertificate(
        delta=delta,
        lipschitz_ok=lip_ok,
        lipschitz_pair=lip_pair,
        lipschitz_value=lip_value,
        lipschitz_allowance=lip_allow,
        lebesgue_ok=leb_ok,
        lebesgue_pair=leb_pair,
        boundedness=bcert,
        ok=lip_ok and leb_ok and bcert.ok,
    )


def certify_pu_metric(f: PartitionOfUnity, cover: Cover, metric: FiniteMetricSpace,
                      eps, diameter_bound) -> PUCertificate:
    """Cover-based certificate with star-preimage boundedness taken metrically."""
    if cover.n_points != metric.n_points:
        raise InputError("cover is over a different point set than the metric space")
    eps = None if eps is None else Fraction(eps)
    var = variation(f, cover)
    var_ok = eps is None or var.value < eps
    witnesses, failing = coarsening_witnesses(f, cover)
    bcert = _metric_boundedness(f, metric, Fraction(diameter_bound))
    return PUCertificate(
        eps=eps,
        variation_value=var.value,
        variation_pair=var.pair,
        variation_ok=var_ok,
        coarsening=witnesses,
        coarsening_ok=failing is None,
        coarsening_failure=failing,
        boundedness=bcert,
        ok=var_ok and failing is None and bcert.ok,
    )


def comparison_forward(f: PartitionOfUnity, metric: FiniteMetricSpace, delta,
                       diameter_bound) -> PUCertificate:
    """From a metric certificate at delta^2/4 to a ball-cover certificate at delta.

    Gates on the metric certificate first; a failed gate raises rather than
    reporting a comparison failure.
    """
    delta = Fraction(delta)
    if not 0 < delta < 2:
        raise InputError("delta must lie strictly between 0 and 2")
    gate = certify_delta_pu(f, metric, delta * delta / 4, diameter_bound)
    if not gate.ok:
        raise PreconditionError(
            "input does not certify at delta^2/4 on the metric side", witness=gate)
    balls = ball_cover(metric, 1 / delta)
    return certify_pu_metric(f, balls, metric, delta, diameter_bound)


def comparison_backward(f: PartitionOfUnity, metric: FiniteMetricSpace, delta,
                        diameter_bound, cover: Cover | None = None) -> DeltaPUCertificate:
    """From a ball-cover certificate at delta to a metric certificate at 2*delta.

    The cover defaults to the balls of radius 1/delta; whichever cover is used
    must have elements of metric diameter at most 2/delta and pairwise
    Lebesgue number at least 1/delta.
    """
    delta = Fraction(delta)
    if not 0 < delta < 2:
        raise InputError("delta must lie strictly between 0 and 2")
    if cover is None:
        cover = ball_cover(metric, 1 / delta)
    if cover.n_points != metric.n_points:
        raise InputError("cover is over a different point set than the metric space")
    max_diam = 2 / delta
    for i, s in enumerate(cover.sets):
        if metric.set_diameter(s) > max_diam:
            raise PreconditionError(
                f"cover element {i} has metric diameter above 2/delta", witness=i)
    threshold = 1 / delta
    for x in range(metric.n_points):
        for y in range(x + 1, metric.n_points):
            if metric.dist[x][y] < threshold:
                if not any(x in s and y in s for s in cover.sets):
                    raise PreconditionError(
                        f"pair ({x}, {y}) is closer than 1/delta but shares no element",
                        witness=(x, y))
    gate = certify_pu_metric(f, cover, metric, delta, diameter_bound)
    if not gate.ok:
        raise PreconditionError(
            "input does not certify against the cover at delta", witness=gate)
    return certify_delta_pu(f, metric, 2 * delta, diameter_bound)
