import itertools
import json
from fractions import Fraction

import pytest

import rlnc_bounds as rb


def bound(report, bound_id):
    return next(b for b in report["bounds"] if b["bound_id"] == bound_id)


def test_field_and_rank():
    assert rb.field_supported(256) and not rb.field_supported(6)
    assert rb.field_mul(4, 2, 2) == 3
    for x in range(1, 7):
        assert rb.field_mul(7, x, rb.field_inv(7, x)) == 1
    assert rb.rank(2, [[1, 1], [1, 1]]) == 1
    assert rb.rank(3, [[1, 2], [2, 1]]) == 1  # det = -3
    assert rb.rank(3, [[1, 2], [1, 1]]) == 2
    with pytest.raises(rb.UnsupportedField):
        rb.field_add(6, 1, 1)


def test_singular_fraction_matches_count():
    for q in (2, 3):
        singular = sum(
            (a * d - b * c) % q == 0 for a, b, c, d in itertools.product(range(q), repeat=4)
        )
        assert rb.compute_a(q, 2) == Fraction(singular, q**4)
    assert rb.lemma1(2, 2, 0) == Fraction(3, 8)


def test_enumerate_matches_cut_bound():
    g2 = rb.plait_union(2, 1, 2)
    exact = rb.enumerate_exact(g2, 2, 2)
    report = rb.analyze(g2, 2, 2)
    assert exact["assignments"] == 4096
    assert rb.as_fraction(bound(report, "thm1")) == Fraction(485, 512)
    assert rb.as_fraction(exact["network"]) == Fraction(485, 512)


def test_invalid_bound_has_no_probability():
    report = rb.analyze(rb.butterfly(), 2, 2)
    thm1 = bound(report, "thm1")
    assert thm1["valid"] is False and thm1["probability"] is None
    assert rb.as_fraction(thm1) == Fraction(16375, 16384)


def test_simulate_deterministic():
    net = rb.butterfly()
    a = rb.simulate(net, 2, 2, trials=5000, seed=3, workers=1)
    b = rb.simulate(net, 2, 2, trials=5000, seed=3, workers=4)
    assert a == b


def test_sweep_and_errors():
    table = rb.sweep("thm3", [256, 65536], rate=2, n=8, l=2)
    assert abs(table["rows"][-1]["scaled"]["float"] - 10) < 0.1
    t4 = rb.sweep("thm4", [65536], rate=2, network=rb.butterfly())
    assert t4["limit"] == 10
    with pytest.raises(rb.CapacityError):
        rb.analyze(rb.butterfly(), 3, 2)
    with pytest.raises(rb.ParseError):
        rb.normalize_network("{")
    net = json.loads(rb.plait(2, 1))
    assert len(net["channels"]) == 4
