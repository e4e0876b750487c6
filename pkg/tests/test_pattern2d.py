from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ballpin.errors import (DegenerateInput, InvalidPattern, NotSpanningTriple,
                            ProvidedAnglesNotSigma5)
from ballpin.pattern2d import (
    HalfplanePattern,
    OpenArc,
    PlanarLine,
    counterexample_from_direction,
    crossing_time,
    direction_from_angle,
    is_pinning_pattern,
    is_sigma5,
    min_signed_separation_deg,
    order_violation,
    positively_spans,
    random_pattern,
    sample_counterexample,
    sigma5,
    signed_cyclic_order,
    spanning_triples,
    triple_arc,
)
from oracles import (dense_arc_cover, order_respecting_exact, positively_spans_cramer,
                     sigma5_from_increasing)

SIGMA5_ORDER = [1, -3, 5, 2, -4, -1, 3, -5, -2, 4]


def d(a):
    return direction_from_angle(a)


def test_sigma5_default_angles_and_order():
    P = sigma5()
    assert P.angles() == pytest.approx([0, 108, 216, 324, 72], abs=1e-12)
    order = signed_cyclic_order(P)
    start = order.index(1)
    assert order[start:] + order[:start] == SIGMA5_ORDER
    # consecutive signed normals sit 36 degrees apart
    assert min_signed_separation_deg(P) == pytest.approx(36.0)


def test_sigma5_rotated_and_rejected():
    assert is_sigma5(sigma5([a + 10 for a in (0, 108, 216, 324, 72)]))
    with pytest.raises(ProvidedAnglesNotSigma5):
        sigma5([0, 10, 20, 30, 40])


def test_positively_spans_examples():
    assert positively_spans(d(0), d(108), d(216))
    assert not positively_spans(d(0), d(30), d(60))
    assert positively_spans(d(0), d(120), d(240))
    assert not positively_spans((1, 0), (1, 0), (0, 1))
    with pytest.raises(DegenerateInput):
        positively_spans((1, 0), (-1, 0), (2, 0))


@given(st.lists(st.floats(0, 360, allow_nan=False), min_size=3, max_size=3))
def test_positively_spans_matches_cramer(angles):
    vs = [d(a) for a in angles]
    try:
        got = positively_spans(*vs)
    except DegenerateInput:
        return
    assert got == positively_spans_cramer(*vs)


def test_spanning_triples_examples():
    assert spanning_triples(sigma5()) == [(0, 1, 2), (0, 2, 4), (1, 2, 3), (2, 3, 4)]
    assert spanning_triples(HalfplanePattern.from_angles([0, 90])) == []
    assert spanning_triples(HalfplanePattern.from_angles([0, 120, 240])) == [(0, 1, 2)]


def test_triple_arcs_of_sigma5():
    P = sigma5()
    a = triple_arc(P, 0, 1, 2)
    assert (a.start_deg % 360, a.end_deg % 360) == pytest.approx((126, 270))
    a = triple_arc(P, 2, 3, 4)
    assert (a.start_deg % 360, a.end_deg % 360) == pytest.approx((342, 126))
    with pytest.raises(NotSpanningTriple):
        triple_arc(P, 0, 1, 3)
    with pytest.raises(NotSpanningTriple):
        triple_arc(P, 2, 1, 0)


def test_arc_endpoints_are_open():
    a = triple_arc(sigma5(), 0, 1, 2)
    assert not a.contains(a.start) and not a.contains(a.end)


def test_half_circle_arc():
    arc = OpenArc((Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0)))
    assert arc.contains((Fraction(-1), Fraction(0)))
    assert not arc.contains((Fraction(0), Fraction(1)))
    assert not arc.contains((Fraction(1), Fraction(3)))


def test_sigma5_is_pinning_and_arcs_cover():
    v = is_pinning_pattern(sigma5())
    assert v.is_pinning and len(v.arcs) == 4
    arcs = [(a.start_deg, a.end_deg) for _, a in v.arcs]
    assert dense_arc_cover(arcs) == 1.0


def test_small_patterns_never_pin():
    assert not is_pinning_pattern(HalfplanePattern.from_angles([0])).is_pinning
    assert not is_pinning_pattern(HalfplanePattern.from_angles([0, 100])).is_pinning


def test_tripod_fails_with_witness():
    P = HalfplanePattern.from_angles([0, 120, 240])
    v = is_pinning_pattern(P)
    assert not v.is_pinning
    (_, arc), = v.arcs
    assert (arc.start_deg % 360, arc.end_deg % 360) == pytest.approx((150, 270))
    assert not arc.contains(v.uncovered)
    line = v.counterexample
    assert order_respecting_exact(P.normals, line.p0, line.u)


def test_crossing_time_examples():
    c = crossing_time((1, 0), (1, 0), (-1, 0))
    assert (c.kind, c.t) == ("ENTER", 1)
    c = crossing_time((1, 0), (-1, 0), (1, 0))
    assert (c.kind, c.t) == ("EXIT", 1)
    assert crossing_time((0, 1), (0, -1), (1, 0)).kind == "NEVER"


def test_sampling_examples():
    assert sample_counterexample(sigma5(), 100_000, seed=0) is None
    tri = HalfplanePattern.from_angles([0, 120, 240])
    line = sample_counterexample(tri, 10_000, seed=0)
    assert line is not None and order_violation(tri, line) is None
    single = HalfplanePattern.from_angles([30])
    assert sample_counterexample(single, 1, seed=0) is not None


def test_sampling_is_deterministic():
    P = HalfplanePattern.from_angles([0, 120, 240])
    assert sample_counterexample(P, 5000, 7) == sample_counterexample(P, 5000, 7)


def test_pattern_rejects_parallel_and_zero():
    with pytest.raises(InvalidPattern):
        HalfplanePattern(((1, 0), (-2, 0)))
    with pytest.raises(InvalidPattern):
        HalfplanePattern(((1, 1), (3, 3)))
    # sin(pi) is not exactly zero, so these two are distinct lines
    assert len(HalfplanePattern.from_angles([0, 180])) == 2
    with pytest.raises(InvalidPattern):
        HalfplanePattern(((0, 0),))
    with pytest.raises(InvalidPattern):
        HalfplanePattern(())


def test_pattern_json_round_trip():
    P = sigma5()
    assert HalfplanePattern.from_json(P.to_json()) == P
    line = PlanarLine((Fraction(1, 3), Fraction(2)), (Fraction(-1), Fraction(5, 7)))
    assert PlanarLine.from_json(line.to_json()) == line


angles5 = st.lists(st.floats(0, 360, allow_nan=False, exclude_max=True),
                   min_size=3, max_size=6)


def _pattern(angles):
    try:
        return HalfplanePattern.from_angles(angles)
    except InvalidPattern:
        assume(False)


@given(angles5, st.floats(-360, 360, allow_nan=False))
def test_rotation_invariance(angles, rot):
    P = _pattern(angles)
    assume(min_signed_separation_deg(P) > 1e-6)
    assert is_pinning_pattern(P).is_pinning == is_pinning_pattern(P.rotated(rot)).is_pinning


@given(angles5, st.data())
def test_small_perturbations_keep_the_verdict(angles, data):
    P = _pattern(angles)
    sep = min_signed_separation_deg(P)
    assume(sep > 1e-6)
    jitter = data.draw(st.lists(st.floats(-0.49, 0.49), min_size=len(P), max_size=len(P)))
    Q = HalfplanePattern.from_angles([a + j * sep for a, j in zip(P.angles(), jitter)])
    assert is_pinning_pattern(P).is_pinning == is_pinning_pattern(Q).is_pinning


@given(st.lists(st.floats(0, 179.9, allow_nan=False), min_size=5, max_size=5, unique=True))
def test_every_realisation_of_the_order_pins(raw):
    a = sorted(raw)
    assume(min(b - c for b, c in zip(a[1:], a)) > 1e-3 and a[0] + 180 - a[-1] > 1e-3)
    P = HalfplanePattern.from_angles(sigma5_from_increasing(a))
    assert is_sigma5(P)
    assert is_pinning_pattern(P).is_pinning
    assert is_sigma5(sigma5(P.angles()))


@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
def test_negative_verdicts_carry_exact_counterexamples(k, seed):
    P = random_pattern(k, np.random.default_rng(seed))
    v = is_pinning_pattern(P)
    if v.is_pinning:
        assert dense_arc_cover([(a.start_deg, a.end_deg) for _, a in v.arcs]) == 1.0
    else:
        assert order_respecting_exact(P.normals, v.counterexample.p0, v.counterexample.u)
        line = counterexample_from_direction(P, v.uncovered, 10_000, seed)
        assert line is not None


def test_mirror_order_is_accepted():
    mirrored = HalfplanePattern.from_angles([-a for a in sigma5().angles()])
    assert is_sigma5(mirrored)
    assert is_pinning_pattern(mirrored).is_pinning
