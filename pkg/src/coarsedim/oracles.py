"""Independent brute-force reference implementations for tiny instances.

These deliberately avoid the algorithms used by the library proper (multi-
source BFS, frontier star growth) so they can serve as oracles in randomized
comparisons: chain indices by literal endpoint enumeration or path search,
stars by scanning every element, nerves by checking every index subset.
"""

from __future__ import annotations

from itertools import combinations

from .covers import Cover, chain_graph
from .extnat import INFINITY, ExtNat


def chain_index_by_enumeration(cover: Cover, x: int, region) -> ExtNat:
    """Chain index via the sets of endpoints reachable by chains of length <= j."""
    inside = frozenset(region)
    if x not in inside:
        return ExtNat(0)
    graph = chain_graph(cover)
    reachable = {x}
    for j in range(1, cover.n_points + 1):
        nxt = set(reachable)
        for p in reachable:
            nxt.update(graph.neighbors[p])
        reachable = nxt
        if reachable - inside:
            return ExtNat(j)
    return INFINITY


def chain_index_by_paths(cover: Cover, x: int, region) -> ExtNat:
    """Chain index via depth-first enumeration of all injective chains (tiny spaces)."""
    inside = frozenset(region)
    if x not in inside:
        return ExtNat(0)
    graph = chain_graph(cover)
    best: list[int | None] = [None]

    def walk(p: int, length: int, visited: frozenset[int]):
        if best[0] is not None and length >= best[0]:
            return
        for y in graph.neighbors[p]:
            if y in visited:
                continue
            if y not in inside:
                if best[0] is None or length + 1 < best[0]:
                    best[0] = length + 1
            else:
                walk(y, length + 1, visited | {y})

    walk(x, 0, frozenset((x,)))
    return ExtNat(best[0]) if best[0] is not None else INFINITY


def star_set_bruteforce(points, cover: Cover) -> frozenset[int]:
    region = frozenset(points)
    out: set[int] = set()
    for s in cover.sets:
        if s & region:
            out |= s
    return frozenset(out)


def iterated_star_bruteforce(cover: Cover, k: int) -> Cover:
    """k-fold star by literally starring every element once per level."""
    sets = list(cover.sets)
    for _ in range(k):
        sets = [star_set_bruteforce(s, cover) for s in sets]
    return Cover(tuple(sets), cover.n_points, cover.allow_empty)


def nerve_simplices_bruteforce(cover: Cover, d_cap: int) -> frozenset[frozenset[int]]:
    """All index subsets up to the cap with a common point, checked one by one."""
    out: set[frozenset[int]] = set()
    indices = range(len(cover.sets))
    for size in range(1, d_cap + 2):
        for combo in combinations(indices, size):
            common = cover.sets[combo[0]]
            for i in combo[1:]:
                common = common & cover.sets[i]
                if not common:
                    break
            if common:
                out.add(frozenset(combo))
    return frozenset(out)
