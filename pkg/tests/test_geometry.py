from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ddir.geometry import (
    UNIT_SQUARE,
    VERTICAL,
    CollinearOverlap,
    GeometryError,
    Homothety,
    NotASquare,
    Point,
    Rect,
    Segment,
    Slope,
    crosses_horizontally,
    crosses_vertically,
    format_rational,
    parse_rational,
    q,
    scale_into,
    seg_intersection_point,
    seg_intersects,
    seg_meets_rect,
    slope_of,
    x_range_in_band,
)

small = st.fractions(min_value=-3, max_value=3, max_denominator=7)
unit = st.fractions(min_value=0, max_value=1, max_denominator=12)


@st.composite
def segments(draw, coord=small):
    a = Point(draw(coord), draw(coord))
    b = Point(draw(coord), draw(coord))
    if a == b:
        b = Point(a.x + 1, a.y)
    return Segment(a, b)


def _params_meet(s1, s2):
    """Independent check: solve for the common point with parameters in [0, 1]."""
    dx1, dy1 = s1.b.x - s1.a.x, s1.b.y - s1.a.y
    dx2, dy2 = s2.b.x - s2.a.x, s2.b.y - s2.a.y
    den = dx1 * dy2 - dy1 * dx2
    rx, ry = s2.a.x - s1.a.x, s2.a.y - s1.a.y
    if den != 0:
        lam = (rx * dy2 - ry * dx2) / den
        mu = (rx * dy1 - ry * dx1) / den
        return 0 <= lam <= 1 and 0 <= mu <= 1
    if rx * dy1 - ry * dx1 != 0:
        return False  # parallel, different lines
    # collinear: compare projections on the direction of s1
    proj = lambda p: (p.x - s1.a.x) * dx1 + (p.y - s1.a.y) * dy1
    lo1, hi1 = sorted((0, proj(s1.b)))
    lo2, hi2 = sorted((proj(s2.a), proj(s2.b)))
    return lo1 <= hi2 and lo2 <= hi1


def test_parse_and_format():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(5)) == "5"
    for bad in ("1.5", "1/0", "a/2", "", "1/-2"):
        with pytest.raises(ValueError):
            parse_rational(bad)
    with pytest.raises(TypeError):
        q(0.5)


@given(small)
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_basic_intersections():
    s = Segment.of(0, 0, 1, 1)
    assert seg_intersects(s, Segment.of(0, 1, 1, 0))
    assert seg_intersection_point(s, Segment.of(0, 1, 1, 0)) == Point.of("1/2", "1/2")
    # touching at an endpoint counts
    assert seg_intersects(s, Segment.of(1, 1, 2, 0))
    assert not seg_intersects(s, Segment.of(0, "1/10", 1, "11/10"))
    # collinear touching gives the shared endpoint; overlap is an error
    assert seg_intersection_point(s, Segment.of(1, 1, 2, 2)) == Point.of(1, 1)
    with pytest.raises(CollinearOverlap):
        seg_intersection_point(s, Segment.of("1/2", "1/2", 2, 2))
    assert seg_intersects(s, s)


def test_zero_length_and_degenerate_rect():
    with pytest.raises(GeometryError):
        Segment.of(1, 1, 1, 1)
    with pytest.raises(GeometryError):
        Rect.of(0, 0, 0, 1)


@given(segments(), segments())
def test_intersects_matches_parametric_oracle(s1, s2):
    assert seg_intersects(s1, s2) == seg_intersects(s2, s1) == _params_meet(s1, s2)


@given(segments(), segments())
def test_intersection_point_lies_on_both(s1, s2):
    try:
        p = seg_intersection_point(s1, s2)
    except CollinearOverlap:
        assert slope_of(s1) == slope_of(s2)
        return
    if p is None:
        assert not seg_intersects(s1, s2)
        return
    for s in (s1, s2):
        cross = (s.b.x - s.a.x) * (p.y - s.a.y) - (s.b.y - s.a.y) * (p.x - s.a.x)
        assert cross == 0 and s.x_lo <= p.x <= s.x_hi and s.y_lo <= p.y <= s.y_hi


def test_slopes():
    assert slope_of(Segment.of(0, 0, 2, 1)) == Slope(Fraction(1, 2))
    assert slope_of(Segment.of(2, 1, 0, 0)) == Slope(Fraction(1, 2))
    assert slope_of(Segment.of(0, 0, 0, 1)) == VERTICAL
    assert sorted([VERTICAL, Slope(Fraction(3)), Slope(Fraction(-1))]) == [Slope(Fraction(-1)), Slope(Fraction(3)), VERTICAL]
    assert str(VERTICAL) == "inf"


def test_crossing():
    r = Rect.of(0, 1, 0, 1)
    assert crosses_vertically(Segment.of("1/2", -1, "1/2", 2), r)
    assert crosses_vertically(Segment.of(0, 0, 1, 1), r)  # corner to corner
    assert not crosses_vertically(Segment.of("1/2", "1/2", "1/2", 2), r)
    assert crosses_horizontally(Segment.of(-1, "1/3", 2, "1/3"), r)
    assert seg_meets_rect(Segment.of("1/4", "1/4", "1/2", "1/2"), r)  # fully inside
    assert not seg_meets_rect(Segment.of(2, 2, 3, 3), r)


def test_rect_properties():
    r = Rect.of(0, "1/2", 0, "1/4")
    assert r.aspect_ratio == Fraction(1, 2)
    assert not r.is_square
    assert r.right_extension() == Rect.of(0, 1, 0, "1/4")
    assert UNIT_SQUARE.contains_rect(r)
    assert r.intersects_rect(Rect.of("1/2", 1, "1/4", 1))  # touching corners


def test_band():
    s = Segment.of(0, 0, 1, 1)
    assert x_range_in_band(s, Fraction(1, 4), Fraction(1, 2)) == (Fraction(1, 4), Fraction(1, 2))
    assert x_range_in_band(s, Fraction(2), Fraction(3)) is None


def test_homothety():
    sq = Rect.of("1/4", "3/4", "1/4", "3/4")
    assert scale_into(sq, Point.of(1, 1)) == Point.of("3/4", "3/4")
    with pytest.raises(NotASquare):
        Homothety(Rect.of(0, 1, 0, "1/2"))
    with pytest.raises(GeometryError):
        scale_into(Rect.of(1, 2, 1, 2), Point.of(0, 0))


@given(segments(unit), segments(unit), unit, unit, st.fractions(min_value=Fraction(1, 20), max_value=1, max_denominator=20))
def test_homothety_preserves_slope_and_incidence(s1, s2, ox, oy, r):
    h = Homothety(Rect(ox, ox + r, oy, oy + r))
    assert slope_of(h.segment(s1)) == slope_of(s1)
    assert seg_intersects(h.segment(s1), h.segment(s2)) == seg_intersects(s1, s2)
