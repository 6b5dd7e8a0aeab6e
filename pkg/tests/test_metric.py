"""Finite metric spaces, ball covers, and both directions of the scale bridge."""

from fractions import Fraction

import pytest

from coarsedim import (
    BarycentricPoint,
    Cover,
    FiniteMetricSpace,
    InputError,
    PartitionOfUnity,
    PreconditionError,
    ball_cover,
    barycentric_map,
    certify_delta_pu,
    comparison_backward,
    comparison_forward,
    gen_line,
    gen_random_geometric,
)

F = Fraction


def constant_map(n, vertex=0, vertices=(0, 1)):
    values = {x: BarycentricPoint.vertex(vertex) for x in range(n)}
    return PartitionOfUnity(values, n, tuple(vertices))


# --- metric space construction ------------------------------------------------

def test_metric_rejects_triangle_violation():
    rows = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    with pytest.raises(InputError):
        FiniteMetricSpace(3, rows)


def test_metric_rejects_asymmetry():
    rows = [[0, 1], [2, 0]]
    with pytest.raises(InputError):
        FiniteMetricSpace(2, rows)


def test_line_metric_distances():
    m = FiniteMetricSpace.line(10)
    assert m.d(0, 9) == 9
    assert m.d(4, 4) == 0


def test_random_geometric_metric_satisfies_triangle():
    inst = gen_random_geometric(30, F(1, 4), seed=7)
    # construction is l1 on coordinates, so this re-verifies the invariant
    FiniteMetricSpace(30, inst.metric.dist, check_triangle=True)


# --- ball covers ------------------------------------------------------------------

def test_ball_cover_small_radius_gives_singletons():
    m = FiniteMetricSpace.line(5)
    c = ball_cover(m, F(1, 2))
    assert c.sets == tuple(frozenset((i,)) for i in range(5))


def test_ball_cover_large_radius_gives_whole_space():
    m = FiniteMetricSpace.line(5)
    c = ball_cover(m, 10)
    assert all(s == frozenset(range(5)) for s in c.sets)


def test_ball_cover_line_example():
    m = FiniteMetricSpace.line(10)
    c = ball_cover(m, 2)
    assert sorted(c.sets[5]) == [3, 4, 5, 6, 7]


def test_ball_cover_elements_have_bounded_diameter():
    inst = gen_random_geometric(25, F(1, 4), seed=3)
    r = F(1, 3)
    c = ball_cover(inst.metric, r)
    for s in c.sets:
        assert inst.metric.set_diameter(s) <= 2 * r


# --- metric certificates --------------------------------------------------------------

def test_constant_map_certifies_at_any_delta():
    m = FiniteMetricSpace.line(8)
    f = constant_map(8)
    cert = certify_delta_pu(f, m, F(1, 10), 7)
    assert cert.ok
    small = certify_delta_pu(f, m, F(1, 10), 3)
    assert not small.ok and not small.boundedness.ok


def test_two_point_space_lipschitz_cutoff():
    # two points at distance 1/delta mapping to distinct vertices:
    # displacement 2 against allowance delta*(1/delta)+delta = 1+delta
    for delta, expect in ((F(1), True), (F(3, 2), True), (F(1, 2), False)):
        m = FiniteMetricSpace(2, [[0, 1 / delta], [1 / delta, 0]])
        values = {0: BarycentricPoint.vertex(0), 1: BarycentricPoint.vertex(1)}
        f = PartitionOfUnity(values, 2, (0, 1))
        cert = certify_delta_pu(f, m, delta, 1 / delta)
        assert cert.lipschitz_ok is expect
        # the pair is closer than 1/delta only in the failing regime
        assert cert.lebesgue_ok is (not expect or delta >= 1)


def fine_scale_map(n=100, radius=32):
    metric = FiniteMetricSpace.line(n)
    line = gen_line(n)
    balls = ball_cover(metric, radius)
    return metric, barycentric_map(line.space.gauge, balls)


def test_fine_scale_map_certifies_at_one_sixteenth():
    metric, f = fine_scale_map()
    cert = certify_delta_pu(f, metric, F(1, 16), 64)
    assert cert.ok


# --- the bridge -------------------------------------------------------------------------

def test_forward_comparison_on_fine_scale_map():
    metric, f = fine_scale_map()
    cert = comparison_forward(f, metric, F(1, 2), 99)
    assert cert.ok
    assert cert.variation_value < F(1, 2)


def test_forward_comparison_constant_map():
    metric = FiniteMetricSpace.line(50)
    cert = comparison_forward(constant_map(50), metric, F(1, 2), 49)
    assert cert.ok and cert.variation_value == 0


def test_forward_comparison_rejects_bad_gate():
    # distinct vertices one step apart violate the delta^2/4 Lipschitz bound
    metric = FiniteMetricSpace.line(4)
    values = {x: BarycentricPoint.vertex(x % 2) for x in range(4)}
    f = PartitionOfUnity(values, 4, (0, 1))
    with pytest.raises(PreconditionError):
        comparison_forward(f, metric, F(1, 2), 3)


def test_backward_comparison_on_fine_scale_map():
    metric, f = fine_scale_map()
    cert = comparison_backward(f, metric, F(1, 2), 99)
    assert cert.ok
    assert cert.delta == 1  # certified at 2*delta


def test_backward_comparison_gate_ordering():
    metric = FiniteMetricSpace.line(4)
    values = {x: BarycentricPoint.vertex(x % 2) for x in range(4)}
    f = PartitionOfUnity(values, 4, (0, 1))
    with pytest.raises(PreconditionError):
        comparison_backward(f, metric, F(1, 2), 3)


def test_backward_comparison_checks_cover_geometry():
    metric, f = fine_scale_map()
    toolarge = Cover.of([range(100)], 100)
    with pytest.raises(PreconditionError):
        comparison_backward(f, metric, F(1, 2), 99, cover=toolarge)


def test_far_pairs_satisfy_doubled_bound_exactly():
    # at distance >= 1/delta the displacement never exceeds 2 <= 2*delta*d + 2*delta
    metric, f = fine_scale_map()
    delta = F(1, 2)
    cert = comparison_backward(f, metric, delta, 99)
    assert cert.ok
    from coarsedim import l1_distance
    for x in range(0, 100, 7):
        for y in range(x + 2, 100, 13):
            d = metric.d(x, y)
            assert l1_distance(f.values[x], f.values[y]) <= 2 * delta * d + 2 * delta
