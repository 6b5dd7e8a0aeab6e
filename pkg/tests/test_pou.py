"""Barycentric points, nerves, variation, and the certificate conditions."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsedim import (
    BarycentricPoint,
    Cover,
    InputError,
    barycentric_map,
    certify_pu,
    coarsening_witnesses,
    gen_line,
    is_refinement,
    iterated_star,
    l1_distance,
    nerve,
    quotient_variation_bound,
    scalar_variation,
    variation,
)
from coarsedim.generators import random_cover, random_fraction, random_refinement_pair
from coarsedim.oracles import nerve_simplices_bruteforce

F = Fraction


def line_cover(n):
    return Cover.of([{i, i + 1} for i in range(n - 1)], n)


# --- barycentric points ------------------------------------------------------

def test_weights_must_sum_to_one():
    with pytest.raises(InputError):
        BarycentricPoint({0: F(1, 2), 1: F(1, 3)})
    with pytest.raises(InputError):
        BarycentricPoint({0: F(3, 2), 1: F(-1, 2)})


def test_zero_weights_are_dropped():
    p = BarycentricPoint({0: F(1), 1: F(0)})
    assert p.carrier == frozenset({0})


def test_l1_distance_examples():
    a = BarycentricPoint({0: F(2, 3), 1: F(1, 3)})
    b = BarycentricPoint.vertex(0)
    assert l1_distance(a, a) == 0
    assert l1_distance(BarycentricPoint.vertex(0), BarycentricPoint.vertex(5)) == 2
    assert l1_distance(a, b) == F(2, 3)


def test_blend_is_exact():
    a = BarycentricPoint({0: F(1, 2), 1: F(1, 2)})
    b = BarycentricPoint.vertex(2)
    c = a.blend(b, F(1, 3))
    assert c.weights == {0: F(1, 6), 1: F(1, 6), 2: F(2, 3)}
    assert sum(c.weights.values()) == 1


# --- nerve ---------------------------------------------------------------------

def test_nerve_of_disjoint_cover_is_zero_dimensional():
    k = nerve(Cover.of([[0], [1], [2]], 3), 2)
    assert k.dimension == 0
    assert k.all_simplices() == frozenset({frozenset({0}), frozenset({1}), frozenset({2})})


def test_nerve_single_edge():
    k = nerve(Cover.of([[0, 1], [1, 2]], 3), 1)
    assert k.dimension == 1
    assert k.has({0, 1}) and k.has({0}) and not k.has({0, 1, 2})


def test_nerve_of_multiplicity_two_cover_has_no_triangles():
    line = gen_line(40)
    v = line.staggered(5)
    k = nerve(v, v.max_multiplicity() - 1)
    assert k.dimension == 1
    assert all(len(s) <= 2 for s in k.all_simplices())


def test_nerve_matches_subset_enumeration_oracle():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randrange(2, 9)
        cover = random_cover(rng, n)
        d_cap = rng.randrange(0, 4)
        k = nerve(cover, d_cap)
        expected = nerve_simplices_bruteforce(cover, d_cap)
        assert k.all_simplices() == expected
        for s in expected:
            assert k.has(s)


def test_empty_cover_elements_are_not_vertices_of_the_nerve():
    c = Cover.of([[0, 1], []], 2, allow_empty=True)
    k = nerve(c, 1)
    assert k.has({0}) and not k.has({1})


# --- the worked 6-point map -----------------------------------------------------

def worked_map():
    line = gen_line(6)
    u = line.space.gauge
    v = Cover.of([[0, 1, 2, 3], [2, 3, 4, 5]], 6)
    return line, u, v, barycentric_map(u, v)


def test_barycentric_map_worked_example():
    _, _, _, pu = worked_map()
    assert pu.values[0].weights == {0: F(1)}
    assert pu.values[1].weights == {0: F(1)}
    assert pu.values[2].weights == {0: F(2, 3), 1: F(1, 3)}
    assert pu.values[3].weights == {0: F(1, 3), 1: F(2, 3)}
    assert pu.values[4].weights == {1: F(1)}
    assert pu.values[5].weights == {1: F(1)}


def test_barycentric_map_whole_space_is_constant_vertex():
    line = gen_line(5)
    whole = Cover.of([range(5)], 5)
    pu = barycentric_map(line.space.gauge, whole)
    assert all(pu.values[x].weights == {0: F(1)} for x in range(5))


def test_barycentric_map_infinite_branch_takes_all_mass():
    line = gen_line(5)
    v = Cover.of([range(5), [0, 1]], 5)
    pu = barycentric_map(line.space.gauge, v)
    # the whole-space element has infinite index everywhere and absorbs the mass
    assert all(pu.values[x].weights == {0: F(1)} for x in range(5))


def test_star_preimage_worked_example():
    _, _, _, pu = worked_map()
    assert sorted(pu.star_preimage(0)) == [0, 1, 2, 3]
    assert sorted(pu.star_preimage(1)) == [2, 3, 4, 5]
    with pytest.raises(InputError):
        pu.star_preimage(9)


def test_star_preimage_of_constant_map():
    line = gen_line(4)
    whole = Cover.of([range(4)], 4)
    pu = barycentric_map(line.space.gauge, whole)
    assert pu.star_preimage(0) == frozenset(range(4))


def test_star_preimage_of_full_support_map():
    line = gen_line(4)
    doubled = Cover.of([range(4), range(4)], 4)
    pu = barycentric_map(line.space.gauge, doubled)
    assert all(pu.star_preimage(v) == frozenset(range(4)) for v in (0, 1))


def test_infinite_branch_is_constant_on_shared_elements():
    # wherever a pair shares an element, the infinite-index sets agree
    rng = random.Random(29)
    for _ in range(40):
        n = rng.randrange(2, 9)
        u = random_cover(rng, n)
        v = random_cover(rng, n)
        pu = barycentric_map(u, v)
        from coarsedim import chain_graph, chain_index
        graph = chain_graph(u)
        inf_sets = []
        for x in range(n):
            inf_sets.append({s for s in range(len(v.sets))
                             if not chain_index(u, x, v.sets[s]).is_finite})
        for x in range(n):
            for y in graph.neighbors[x]:
                assert inf_sets[x] == inf_sets[y]
                if inf_sets[x]:
                    assert pu.values[x] == pu.values[y]


def test_carriers_are_simplices_of_the_nerve():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.randrange(2, 10)
        u = random_cover(rng, n)
        v = random_cover(rng, n)
        pu = barycentric_map(u, v)
        assert pu.complex is not None
        for x in range(n):
            assert pu.complex.has(pu.values[x].carrier)


def test_exact_weight_sums_everywhere():
    rng = random.Random(37)
    for _ in range(30):
        n = rng.randrange(2, 12)
        pu = barycentric_map(random_cover(rng, n), random_cover(rng, n))
        for x in range(n):
            assert sum(pu.values[x].weights.values()) == 1


# --- variation -------------------------------------------------------------------

def test_variation_of_constant_map_is_zero():
    line = gen_line(6)
    whole = Cover.of([range(6)], 6)
    pu = barycentric_map(line.space.gauge, whole)
    res = variation(pu, line.space.gauge)
    assert res.value == 0 and res.pair == (0, 1)


def test_variation_under_singleton_cover_is_zero():
    _, _, _, pu = worked_map()
    singles = Cover.of([[i] for i in range(6)], 6)
    res = variation(pu, singles)
    assert res.value == 0 and res.pair is None


def test_variation_worked_example():
    line, u, _, pu = worked_map()
    res = variation(pu, u)
    assert res.value == F(2, 3)
    assert res.pair == (1, 2)


def test_scalar_variation_matches_pair_scan():
    rng = random.Random(41)
    for _ in range(30):
        n = rng.randrange(2, 10)
        cover = random_cover(rng, n)
        vals = [random_fraction(rng, 0, 3) for _ in range(n)]
        res = scalar_variation(vals, cover)
        expected = F(0)
        for s in cover.sets:
            pts = sorted(s)
            for i, a in enumerate(pts):
                for b in pts[i + 1:]:
                    expected = max(expected, abs(vals[a] - vals[b]))
        assert res.value == expected


# --- quotient bound ---------------------------------------------------------------

def test_quotient_bound_values():
    assert quotient_variation_bound(1, 0) == 1
    assert quotient_variation_bound(10, 3) == F(2, 5)
    with pytest.raises(InputError):
        quotient_variation_bound(0, 1)


def test_quotient_bound_dominates_measured_variation():
    rng = random.Random(43)
    for _ in range(200):
        n_pts = rng.randrange(2, 12)
        cover = random_cover(rng, n_pts)
        m = random_fraction(rng, 1, 3)
        q = [m + random_fraction(rng, 0, 3) for _ in range(n_pts)]
        p = [random_fraction(rng, 0, 1) for _ in range(n_pts)]
        n_bound = scalar_variation(q, cover).value
        measured = scalar_variation([pi / qi for pi, qi in zip(p, q)], cover).value
        assert measured <= quotient_variation_bound(m, n_bound)


# --- certification -----------------------------------------------------------------

def test_certify_constant_vertex_map():
    line = gen_line(8)
    u = line.space.gauge
    whole = Cover.of([range(8)], 8)
    pu = barycentric_map(u, whole)
    good = certify_pu(pu, u, line.space, F(1), 7)
    assert good.ok and good.variation_value == 0
    tight = certify_pu(pu, u, line.space, F(1), 3)
    assert not tight.ok and not tight.boundedness.ok


def test_certify_condition_b_for_refining_pairs():
    rng = random.Random(47)
    for _ in range(40):
        n = rng.randrange(2, 12)
        fine, coarse = random_refinement_pair(rng, n)
        pu = barycentric_map(fine, coarse)
        witnesses, failing = coarsening_witnesses(pu, fine)
        assert failing is None
        for i, s in enumerate(fine.sets):
            v = witnesses[i]
            assert all(pu.values[x].weight(v) > 0 for x in s)


def test_certify_line_staggered_instance():
    line = gen_line(200)
    u = line.space.gauge
    v = line.staggered(25)
    assert is_refinement(iterated_star(u, 10), v).ok
    pu = barycentric_map(u, v)
    cert = certify_pu(pu, u, line.space, F(8, 5), 49)
    assert cert.ok
    assert cert.variation_value == F(1, 13)
    assert cert.boundedness.max_diameter == 49


def test_certify_eps_infinite_is_vacuous_on_variation():
    line, u, _, pu = worked_map()
    cert = certify_pu(pu, u, line.space, None, 5)
    assert cert.eps is None and cert.variation_ok and cert.ok


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(0, 10_000))
def test_variation_bound_for_star_refinements(n, seed):
    # whenever the k-fold star refines the target, the measured variation obeys
    # (2n+2)^2/k for n+1 the target multiplicity
    rng = random.Random(seed)
    k = rng.randrange(1, 4)
    base = random_cover(rng, n)
    starred = iterated_star(base, k)
    groups = random_refinement_pair(rng, n)[1]
    sets = tuple(starred.sets[t] | groups.sets[t % len(groups.sets)] for t in range(len(starred.sets)))
    target = Cover(sets, n)
    assert is_refinement(iterated_star(base, k), target).ok
    pu = barycentric_map(base, target)
    mult = target.max_multiplicity()
    bound = F((2 * mult) ** 2, k)  # (2n+2)^2/k with n+1 = mult
    assert variation(pu, base).value <= bound
