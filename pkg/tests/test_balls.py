import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ballpin.balls import (
    Ball,
    BallConfig,
    lift_pattern,
    project_to_pattern,
    realize_screens,
    require_valid,
    screens_of,
    shrink_radii,
    shrink_toward_touchpoint,
    validate,
)
from ballpin.errors import (DeltaTooLarge, GapTooSmall, InvalidConfig, InvalidPattern,
                            NotTangent)
from ballpin.geometry import Flat3, LineChart
from ballpin.linespace import line_meets_screen, strict_transversal
from ballpin.pattern2d import HalfplanePattern, cross, signed_cyclic_order, sigma5


def cfg(*balls, d=3):
    return BallConfig(tuple(Ball(c, r) for c, r in balls), d)


def test_lifted_sigma5_validates():
    C = lift_pattern(sigma5(), 1.0, 3.0)
    rep = validate(C)
    assert rep.ok and len(C) == 5
    assert np.allclose(C.radii(), 1.0)
    assert rep.min_disjoint_margin >= 1.0 - 1e-12  # heights 3 apart, radii 1


def test_validate_reports_failures():
    rep = validate(cfg(([-1, 0, 0], 1), ([-1, 0, 1.5], 1)))
    assert not rep.disjoint_ok
    assert rep.disjointness[0][2] == pytest.approx(-0.5)
    rep = validate(cfg(([0, 0, 0], 1), ([-1, 0, 5], 1)))
    assert not rep.tangent_ok
    rep = validate(cfg(([-1, 0, 5], 1), ([-1, 0, 0], 1)))
    assert not rep.ordered_ok and rep.failures()
    with pytest.raises(InvalidConfig):
        require_valid(cfg(([0, 0, 0], 1),))


def test_project_examples():
    P = project_to_pattern(cfg(([-2.0, 0, 4.0], 2.0),))
    assert P.angles() == [0.0]
    with pytest.raises(InvalidConfig):
        project_to_pattern(cfg(([-1, 0, 0], 1), ([1, 0, 3], 1)))
    with pytest.raises(InvalidConfig):
        project_to_pattern(cfg(([-1, 0, 0, 0], 1), d=4))


def test_screens_of_formula():
    C = cfg(([3.0, -4.0, 2.0], 5.0),)
    (s,) = screens_of(C)
    assert s.lam == 2.0 and np.allclose(s.n, [-0.6, 0.8])
    assert strict_transversal(screens_of(C)).strict


def test_sigma5_screens_match_pattern():
    P = sigma5()
    F = screens_of(lift_pattern(P, 1.0, 3.0))
    assert [s.lam for s in F] == [0.0, 3.0, 6.0, 9.0, 12.0]
    want = P.float_normals() / np.linalg.norm(P.float_normals(), axis=1, keepdims=True)
    assert np.allclose([s.n for s in F], want, atol=1e-15)


def test_gap_must_exceed_diameter():
    with pytest.raises(GapTooSmall):
        lift_pattern(sigma5(), 1.0, 2.0)


def test_lift_into_a_flat():
    T = Flat3.from_vectors([1, 1, 0], [0, 0, 1])
    C = lift_pattern(sigma5(), 0.5, 1.5, T)
    assert C.d == 4 and validate(C).ok


def test_shrink_toward_touchpoint():
    B = Ball([-2.0, 0.0, 0.0], 2.0)
    H = shrink_toward_touchpoint(B, 0.5)
    assert np.allclose(H.center, [-1, 0, 0]) and H.radius == 1.0 and H.is_tangent()
    assert np.array_equal(shrink_toward_touchpoint(B, 0.0).center, B.center)
    with pytest.raises(NotTangent):
        shrink_toward_touchpoint(Ball([-3.0, 0, 0], 2.0), 0.5)
    with pytest.raises(ValueError):
        shrink_toward_touchpoint(B, 1.0)


def test_shrink_radii():
    C = lift_pattern(sigma5(), 1.0, 3.0)
    S = shrink_radii(C, 1e-4)
    axis = LineChart.axis(3)
    from ballpin.geometry import line_point_distance
    for b in S:
        assert line_point_distance(axis, b.center) - b.radius == pytest.approx(1e-4, abs=1e-15)
    rep = validate(S)
    assert not rep.tangent_ok and rep.disjoint_ok
    with pytest.raises(DeltaTooLarge):
        shrink_radii(C, 0.0)
    with pytest.raises(DeltaTooLarge):
        shrink_radii(C, 1.0)


def test_config_json_round_trip():
    C = lift_pattern(sigma5(), 1.0, 3.0)
    D = BallConfig.from_json(C.to_json())
    assert np.array_equal(C.centers(), D.centers()) and np.array_equal(C.radii(), D.radii())


def test_realize_screens_inverts_screens_of():
    C = lift_pattern(sigma5(), 0.75, 3.0)
    D = realize_screens(screens_of(C), C.radii())
    assert np.allclose(C.centers(), D.centers(), atol=1e-15)


def _pattern(angles):
    try:
        return HalfplanePattern.from_angles(angles)
    except InvalidPattern:
        assume(False)


def _far_from_subnormal(P):
    # power-of-two scaling is exact only away from the subnormal range
    n = np.abs(P.float_normals())
    return bool(np.all((n == 0) | (n > 1e-280)))


patterns = st.lists(st.floats(0, 360, allow_nan=False, exclude_max=True), min_size=1,
                    max_size=7)
radii = st.floats(0.01, 100.0)


@given(patterns, radii, st.floats(2.001, 5.0))
def test_round_trip_keeps_the_pattern(angles, r, gap_ratio):
    P = _pattern(angles)
    Q = project_to_pattern(lift_pattern(P, r, gap_ratio * r))
    assert signed_cyclic_order(Q) == signed_cyclic_order(P)
    assert np.allclose(np.array(Q.angles()) % 360, np.array(P.angles()) % 360, atol=1e-12)


@given(patterns, st.integers(-4, 6))
def test_round_trip_is_exact_for_power_of_two_radii(angles, e):
    P = _pattern(angles)
    n = P.float_normals()
    assume(_far_from_subnormal(P))
    assume(all(np.linalg.norm(v) == 1.0 for v in n))
    Q = project_to_pattern(lift_pattern(P, 2.0 ** e, 3.0 * 2.0 ** e))
    assert all(cross(a, b) == 0 for a, b in zip(P.normals, Q.normals))
    assert all(x == 2.0 ** e * y for a, b in zip(Q.normals, P.normals) for x, y in zip(a, b))


@given(patterns, st.floats(0.0, 0.99))
def test_screens_commute_with_shrinking(angles, s):
    C = lift_pattern(_pattern(angles), 1.0, 3.0)
    D = BallConfig(tuple(shrink_toward_touchpoint(b, s) for b in C), 3)
    for a, b in zip(screens_of(C), screens_of(D)):
        # scaling the offset rounds each coordinate once
        assert a.lam == b.lam and np.abs(a.n - b.n).max() <= 4 * np.finfo(float).eps


@given(patterns, st.integers(1, 20))
def test_screens_commute_exactly_for_dyadic_shrinking(angles, e):
    P = _pattern(angles)
    assume(_far_from_subnormal(P))
    C = lift_pattern(P, 1.0, 3.0)
    D = BallConfig(tuple(shrink_toward_touchpoint(b, 1 - 2.0 ** -e) for b in C), 3)
    for a, b in zip(screens_of(C), screens_of(D)):
        assert a.lam == b.lam and np.array_equal(a.n, b.n)


@given(patterns, radii, st.floats(2.001, 10.0))
def test_lifts_always_validate(angles, r, gap_ratio):
    C = lift_pattern(_pattern(angles), r, gap_ratio * r)
    assert validate(C).ok


@given(patterns)
def test_axis_touches_every_screen(angles):
    C = lift_pattern(_pattern(angles), 1.0, 3.0)
    assert all(line_meets_screen(LineChart.axis(3), s) == "BOUNDARY" for s in screens_of(C))
