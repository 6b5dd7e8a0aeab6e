"""Deterministic space and cover generators, plus samplers for property tests.

Every generator is a pure function of its arguments; the random-geometric
model uses a small linear congruential generator with rational outputs so the
same seed reproduces the same space on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covers import Cover, FiniteCoarseSpace, chain_graph
from .errors import InputError
from .metric import FiniteMetricSpace


@dataclass(frozen=True)
class LineInstance:
    """A segment 0..n-1 whose gauge is the adjacent pairs."""

    space: FiniteCoarseSpace

    @property
    def n(self) -> int:
        return self.space.n_points

    def staggered(self, half: int) -> Cover:
        """Intervals of length 2*half at stride ``half`` (multiplicity <= 2).

        Starts run 0, half, 2*half, ... up to the least start whose interval
        reaches the end of the line; the last interval is clipped.  Any window
        of at most half+1 consecutive points fits inside a single interval.
        """
        return line_staggered_cover(self.n, half)

    def blocks(self, length: int) -> Cover:
        """Disjoint intervals of the given length (last one clipped)."""
        return line_block_cover(self.n, length)


def gen_line(n: int) -> LineInstance:
    if n < 2:
        raise InputError("a line needs at least 2 points")
    gauge = Cover.of([{i, i + 1} for i in range(n - 1)], n)
    return LineInstance(FiniteCoarseSpace(n, gauge))


def line_staggered_cover(n: int, half: int) -> Cover:
    if half < 1:
        raise InputError("interval half-length must be at least 1")
    if 2 * half >= n:
        return Cover.of([range(n)], n)
    sets = []
    start = 0
    while True:
        end = min(start + 2 * half, n)
        sets.append(range(start, end))
        if start + 2 * half >= n:
            break
        start += half
    return Cover.of(sets, n)


def line_block_cover(n: int, length: int) -> Cover:
    if length < 1:
        raise InputError("block length must be at least 1")
    sets = [range(start, min(start + length, n)) for start in range(0, n, length)]
    return Cover.of(sets, n)


@dataclass(frozen=True)
class GridInstance:
    """A width x height grid whose gauge is the unit-neighbor pairs."""

    space: FiniteCoarseSpace
    width: int
    height: int

    def point(self, x: int, y: int) -> int:
        return y * self.width + x

    def bricks(self, brick: int) -> Cover:
        """Brick partition with alternate rows offset by half a brick."""
        return grid_brick_cover(self.width, self.height, brick)


def gen_grid2d(width: int, height: int) -> GridInstance:
    if width < 2 or height < 2:
        raise InputError("a grid needs width and height at least 2")
    n = width * height

    def pid(x, y):
        return y * width + x

    sets = []
    for y in range(height):
        for x in range(width):
            if x + 1 < width:
                sets.append({pid(x, y), pid(x + 1, y)})
            if y + 1 < height:
                sets.append({pid(x, y), pid(x, y + 1)})
    gauge = Cover.of(sets, n)
    return GridInstance(FiniteCoarseSpace(n, gauge), width, height)


def grid_brick_cover(width: int, height: int, brick: int) -> Cover:
    if brick < 1:
        raise InputError("brick length must be at least 1")
    sets = []
    for band_start in range(0, height, brick):
        band = range(band_start, min(band_start + brick, height))
        offset = (brick // 2) if (band_start // brick) % 2 else 0
        start = -offset
        while start < width:
            xs = range(max(start, 0), min(start + brick, width))
            if xs:
                sets.append({y * width + x for y in band for x in xs})
            start += brick
    return Cover.of(sets, width * height)


class Lcg:
    """Linear congruential generator with rational outputs.

    state' = (1103515245 * state + 12345) mod 2^31; fractions are state/2^31.
    Chosen for easy cross-language reproduction, not for statistical quality.
    """

    MULTIPLIER = 1103515245
    INCREMENT = 12345
    MODULUS = 2 ** 31

    def __init__(self, seed: int):
        self.state = seed % self.MODULUS

    def next_int(self) -> int:
        self.state = (self.MULTIPLIER * self.state + self.INCREMENT) % self.MODULUS
        return self.state

    def next_fraction(self) -> Fraction:
        return Fraction(self.next_int(), self.MODULUS)


@dataclass(frozen=True)
class GeometricInstance:
    space: FiniteCoarseSpace
    metric: FiniteMetricSpace
    coords: tuple[tuple[Fraction, Fraction], ...]


def gen_random_geometric(n: int, radius, seed: int) -> GeometricInstance:
    """n seeded rational points in the unit square with l1 distances.

    The gauge holds one singleton per point plus every pair within the radius,
    so the chain graph is exactly the geometric graph at that radius.
    """
    if n < 1:
        raise InputError("need at least one point")
    radius = Fraction(radius)
    if radius <= 0:
        raise InputError("radius must be positive")
    rng = Lcg(seed)
    coords = tuple((rng.next_fraction(), rng.next_fraction()) for _ in range(n))
    metric = FiniteMetricSpace.from_l1_points(coords)
    sets: list[set[int]] = [{i} for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if metric.dist[i][j] <= radius:
                sets.append({i, j})
    space = FiniteCoarseSpace(n, Cover.of(sets, n))
    return GeometricInstance(space, metric, coords)


@dataclass(frozen=True)
class SpaceSpec:
    """Deterministic description of a generated space."""

    kind: str
    params: tuple[tuple[str, object], ...]

    @classmethod
    def line(cls, n: int) -> "SpaceSpec":
        return cls("line", (("n", n),))

    @classmethod
    def grid2d(cls, width: int, height: int) -> "SpaceSpec":
        return cls("grid2d", (("height", height), ("width", width)))

    @classmethod
    def random_geometric(cls, n: int, radius, seed: int) -> "SpaceSpec":
        return cls("random-geometric",
                   (("n", n), ("radius", Fraction(radius)), ("seed", seed)))

    def realize(self):
        kv = dict(self.params)
        if self.kind == "line":
            return gen_line(kv["n"])
        if self.kind == "grid2d":
            return gen_grid2d(kv["width"], kv["height"])
        if self.kind == "random-geometric":
            return gen_random_geometric(kv["n"], kv["radius"], kv["seed"])
        raise InputError(f"unknown space kind {self.kind!r}")


# ---------------------------------------------------------------------------
# samplers for randomized checks (driven by a caller-supplied random.Random)

def random_cover(rng, n_points: int, max_extra: int = 4, max_size: int = 4,
                 connected: bool = False) -> Cover:
    """A random cover; with ``connected`` the chain graph is made connected."""
    for _ in range(200):
        sets = []
        for _ in range(rng.randrange(1, n_points + max_extra)):
            size = rng.randrange(1, min(max_size, n_points) + 1)
            sets.append(frozenset(rng.sample(range(n_points), size)))
        covered = set().union(*sets) if sets else set()
        for x in range(n_points):
            if x not in covered:
                sets.append(frozenset((x,)))
        cover = Cover(tuple(sets), n_points)
        if not connected or chain_graph(cover).is_connected():
            return cover
    # deterministic fallback: thread a path through the space
    sets = list(cover.sets) + [frozenset((i, i + 1)) for i in range(n_points - 1)]
    return Cover(tuple(sets), n_points)


def random_refinement_pair(rng, n_points: int) -> tuple[Cover, Cover]:
    """A cover together with a random coarsening of it."""
    fine = random_cover(rng, n_points)
    groups = rng.randrange(1, len(fine.sets) + 1)
    assignment = [rng.randrange(groups) for _ in fine.sets]
    merged: dict[int, set[int]] = {}
    for t, g in enumerate(assignment):
        merged.setdefault(g, set()).update(fine.sets[t])
    coarse_sets = []
    for g in sorted(merged):
        s = set(merged[g])
        for _ in range(rng.randrange(0, 3)):
            s.add(rng.randrange(n_points))
        coarse_sets.append(frozenset(s))
    return fine, Cover(tuple(coarse_sets), n_points)


def random_fraction(rng, low: int, high: int, max_denominator: int = 16) -> Fraction:
    den = rng.randrange(1, max_denominator + 1)
    num = rng.randrange(low * den, high * den + 1)
    return Fraction(num, den)
