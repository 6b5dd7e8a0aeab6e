"""Serialization: text formats and tagged JSON documents round-trip losslessly."""

import random
from fractions import Fraction

import pytest

from coarsedim import (
    Cover,
    ExtNat,
    INFINITY,
    InputError,
    barycentric_map,
    certify_pu,
    gen_line,
    gen_random_geometric,
)
from coarsedim.formats import (
    doc_dumps,
    doc_loads,
    dump_cover,
    dump_metric,
    dump_pu,
    dump_space,
    encode,
    load_cover,
    load_metric,
    load_pu,
    load_space,
    parse_fraction,
)
from coarsedim.generators import random_cover

F = Fraction


def test_cover_round_trip():
    rng = random.Random(61)
    for _ in range(20):
        n = rng.randrange(2, 12)
        cover = random_cover(rng, n)
        assert load_cover(dump_cover(cover)) == cover


def test_relaxed_cover_round_trip_keeps_flag():
    c = Cover.of([[0, 1], []], 2, allow_empty=True)
    loaded = load_cover(dump_cover(c))
    assert loaded == c and loaded.allow_empty


def test_space_round_trip():
    space = gen_line(25).space
    assert load_space(dump_space(space)) == space


def test_pu_round_trip():
    line = gen_line(12)
    pu = barycentric_map(line.space.gauge, line.staggered(3))
    loaded = load_pu(dump_pu(pu))
    assert loaded == pu  # equality covers values, point count, and vertices


def test_metric_round_trip():
    inst = gen_random_geometric(15, F(1, 4), seed=2)
    assert load_metric(dump_metric(inst.metric)) == inst.metric


def test_dump_is_byte_stable():
    line = gen_line(30)
    pu = barycentric_map(line.space.gauge, line.staggered(4))
    assert dump_pu(pu) == dump_pu(pu)
    cert = certify_pu(pu, line.space.gauge, line.space, F(1), 29)
    assert doc_dumps(cert) == doc_dumps(cert)


def test_doc_round_trip_with_tagged_scalars():
    doc = {
        "name": "example",
        "bound": F(22, 7),
        "diameter": INFINITY,
        "count": ExtNat(3),
        "items": [F(1, 2), 5, "text", None, True],
        "nested": {"a": F(-3, 4)},
    }
    again = doc_loads(doc_dumps(doc))
    assert again["bound"] == F(22, 7)
    assert again["diameter"] == INFINITY
    assert again["count"] == ExtNat(3)
    assert again["items"] == [F(1, 2), 5, "text", None, True]
    assert again["nested"]["a"] == F(-3, 4)


def test_certificate_document_round_trip():
    line = gen_line(40)
    pu = barycentric_map(line.space.gauge, line.staggered(6))
    cert = certify_pu(pu, line.space.gauge, line.space, F(1, 2), 39)
    text = doc_dumps(cert)
    doc = doc_loads(text)
    assert doc["variation_value"] == cert.variation_value
    assert doc["ok"] == cert.ok
    assert doc_dumps(doc) == text  # second pass is byte-identical


def test_floats_are_refused():
    with pytest.raises(InputError):
        encode({"x": 0.5})


def test_parse_fraction_forms():
    assert parse_fraction("8/5") == F(8, 5)
    assert parse_fraction("3") == 3
    assert parse_fraction("inf") is None


def test_loaders_reject_wrong_headers():
    with pytest.raises(InputError):
        load_cover("coarse-space\npoints 2\nend\n")
    with pytest.raises(InputError):
        load_space("cover\npoints 2\nelement 0 : 0 1\nend\n")
