"""Exact planar geometry over the rationals.

Coordinates are :class:`fractions.Fraction` values (always in lowest terms).
Every predicate reduces to sign computations on exact numbers; there is no
tolerance anywhere in this module.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Rational = Fraction
Number = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


class GeometryError(ValueError):
    pass


class CollinearOverlap(GeometryError):
    """Two segments share a sub-segment of positive length."""


class NotASquare(GeometryError):
    pass


def q(value: Number) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"malformed rational {text!r}; expected 'p' or 'p/q'")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    # str(Fraction) already prints lowest terms and drops "/1"
    return str(value)


@dataclass(frozen=True, slots=True)
class Point:
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: Number, y: Number) -> "Point":
        return cls(q(x), q(y))


@dataclass(frozen=True, slots=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise GeometryError(f"zero-length segment at {self.a}")

    @classmethod
    def of(cls, x1: Number, y1: Number, x2: Number, y2: Number) -> "Segment":
        return cls(Point.of(x1, y1), Point.of(x2, y2))

    @property
    def x_lo(self) -> Fraction:
        return min(self.a.x, self.b.x)

    @property
    def x_hi(self) -> Fraction:
        return max(self.a.x, self.b.x)

    @property
    def y_lo(self) -> Fraction:
        return min(self.a.y, self.b.y)

    @property
    def y_hi(self) -> Fraction:
        return max(self.a.y, self.b.y)

    def key(self) -> tuple:
        """Orientation-independent identity (identical copies share a key)."""
        p, r = (self.a, self.b) if (self.a.x, self.a.y) <= (self.b.x, self.b.y) else (self.b, self.a)
        return (p.x, p.y, r.x, r.y)


@dataclass(frozen=True, slots=True)
class Slope:
    """A segment slope; ``value is None`` encodes the vertical direction."""

    value: Optional[Fraction]

    @property
    def is_vertical(self) -> bool:
        return self.value is None

    def sort_key(self) -> tuple:
        # vertical sorts after every finite slope
        return (1, Fraction(0)) if self.value is None else (0, self.value)

    def __lt__(self, other: "Slope") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "inf" if self.value is None else format_rational(self.value)


VERTICAL = Slope(None)


@dataclass(frozen=True, slots=True)
class Rect:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def __post_init__(self):
        if not (self.x_hi > self.x_lo and self.y_hi > self.y_lo):
            raise GeometryError(f"degenerate rectangle {self.as_tuple()}")

    @classmethod
    def of(cls, x_lo: Number, x_hi: Number, y_lo: Number, y_hi: Number) -> "Rect":
        return cls(q(x_lo), q(x_hi), q(y_lo), q(y_hi))

    @property
    def width(self) -> Fraction:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> Fraction:
        return self.y_hi - self.y_lo

    @property
    def aspect_ratio(self) -> Fraction:
        return self.height / self.width

    @property
    def is_square(self) -> bool:
        return self.width == self.height

    def as_tuple(self) -> tuple:
        return (self.x_lo, self.x_hi, self.y_lo, self.y_hi)

    def top(self) -> Segment:
        return Segment(Point(self.x_lo, self.y_hi), Point(self.x_hi, self.y_hi))

    def bottom(self) -> Segment:
        return Segment(Point(self.x_lo, self.y_lo), Point(self.x_hi, self.y_lo))

    def left(self) -> Segment:
        return Segment(Point(self.x_lo, self.y_lo), Point(self.x_lo, self.y_hi))

    def right(self) -> Segment:
        return Segment(Point(self.x_hi, self.y_lo), Point(self.x_hi, self.y_hi))

    def contains_point(self, p: Point) -> bool:
        return self.x_lo <= p.x <= self.x_hi and self.y_lo <= p.y <= self.y_hi

    def contains_rect(self, other: "Rect") -> bool:
        return (self.x_lo <= other.x_lo and other.x_hi <= self.x_hi
                and self.y_lo <= other.y_lo and other.y_hi <= self.y_hi)

    def intersects_rect(self, other: "Rect") -> bool:
        """Closed rectangles share at least one point."""
        return (self.x_lo <= other.x_hi and other.x_lo <= self.x_hi
                and self.y_lo <= other.y_hi and other.y_lo <= self.y_hi)

    def right_extension(self) -> "Rect":
        return Rect(self.x_lo, Fraction(1), self.y_lo, self.y_hi)


UNIT_SQUARE = Rect(Fraction(0), Fraction(1), Fraction(0), Fraction(1))


def _orient(p: Point, r: Point, s: Point) -> int:
    v = (r.x - p.x) * (s.y - p.y) - (r.y - p.y) * (s.x - p.x)
    return (v > 0) - (v < 0)


def _on_box(p: Point, r: Point, s: Point) -> bool:
    """Assuming p, r, s collinear: is s inside the bounding box of pr?"""
    return min(p.x, r.x) <= s.x <= max(p.x, r.x) and min(p.y, r.y) <= s.y <= max(p.y, r.y)


def seg_intersects(s1: Segment, s2: Segment) -> bool:
    """True iff the closed segments share a point (collinear overlap counts)."""
    p1, p2, p3, p4 = s1.a, s1.b, s2.a, s2.b
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    if d1 == 0 and _on_box(p3, p4, p1):
        return True
    if d2 == 0 and _on_box(p3, p4, p2):
        return True
    if d3 == 0 and _on_box(p1, p2, p3):
        return True
    if d4 == 0 and _on_box(p1, p2, p4):
        return True
    return False


def seg_intersection_point(s1: Segment, s2: Segment) -> Optional[Point]:
    """The unique common point of two segments, or None if they are disjoint.

    Raises CollinearOverlap when the segments share a positive-length piece.
    """
    if not seg_intersects(s1, s2):
        return None
    dx1, dy1 = s1.b.x - s1.a.x, s1.b.y - s1.a.y
    dx2, dy2 = s2.b.x - s2.a.x, s2.b.y - s2.a.y
    den = dx1 * dy2 - dy1 * dx2
    if den == 0:
        # collinear; overlap is a single point only when they meet at an endpoint
        common = {p for p in (s1.a, s1.b) if _on_box(s2.a, s2.b, p)}
        common |= {p for p in (s2.a, s2.b) if _on_box(s1.a, s1.b, p)}
        if len(common) == 1:
            return common.pop()
        raise CollinearOverlap(f"{s1} and {s2} overlap along a segment")
    lam = ((s2.a.x - s1.a.x) * dy2 - (s2.a.y - s1.a.y) * dx2) / den
    return Point(s1.a.x + lam * dx1, s1.a.y + lam * dy1)


def slope_of(s: Segment) -> Slope:
    if s.a.x == s.b.x:
        return VERTICAL
    return Slope((s.b.y - s.a.y) / (s.b.x - s.a.x))


def crosses_vertically(s: Segment, r: Rect) -> bool:
    """The segment meets both the top and the bottom side of the rectangle."""
    return seg_intersects(s, r.top()) and seg_intersects(s, r.bottom())


def crosses_horizontally(s: Segment, r: Rect) -> bool:
    return seg_intersects(s, r.left()) and seg_intersects(s, r.right())


def seg_meets_rect(s: Segment, r: Rect) -> bool:
    """Closed segment and closed rectangle share a point."""
    if s.x_hi < r.x_lo or s.x_lo > r.x_hi or s.y_hi < r.y_lo or s.y_lo > r.y_hi:
        return False
    if r.contains_point(s.a) or r.contains_point(s.b):
        return True
    return any(seg_intersects(s, side) for side in (r.bottom(), r.top(), r.left(), r.right()))


def x_range_in_band(s: Segment, y_lo: Fraction, y_hi: Fraction) -> Optional[tuple[Fraction, Fraction]]:
    """x-extent of the part of ``s`` lying in the horizontal band y_lo <= y <= y_hi."""
    lo, hi = max(s.y_lo, y_lo), min(s.y_hi, y_hi)
    if lo > hi:
        return None
    if s.a.y == s.b.y:
        return s.x_lo, s.x_hi
    dxdy = (s.b.x - s.a.x) / (s.b.y - s.a.y)
    x1 = s.a.x + (lo - s.a.y) * dxdy
    x2 = s.a.x + (hi - s.a.y) * dxdy
    return min(x1, x2), max(x1, x2)


class Homothety:
    """Positive homothety (scaling + translation) sending the unit square onto ``square``."""

    __slots__ = ("ox", "oy", "ratio")

    def __init__(self, square: Rect):
        if not square.is_square:
            raise NotASquare(f"{square.as_tuple()} is not a square")
        self.ox, self.oy, self.ratio = square.x_lo, square.y_lo, square.width

    def point(self, p: Point) -> Point:
        return Point(self.ox + self.ratio * p.x, self.oy + self.ratio * p.y)

    def x(self, x: Fraction) -> Fraction:
        return self.ox + self.ratio * x

    def y(self, y: Fraction) -> Fraction:
        return self.oy + self.ratio * y

    def segment(self, s: Segment) -> Segment:
        return Segment(self.point(s.a), self.point(s.b))

    def rect(self, r: Rect) -> Rect:
        return Rect(self.x(r.x_lo), self.x(r.x_hi), self.y(r.y_lo), self.y(r.y_hi))


def scale_into(square: Rect, obj):
    """Image of a Point, Segment or Rect under the homothety U -> ``square``."""
    if not UNIT_SQUARE.contains_rect(square):
        raise GeometryError(f"{square.as_tuple()} is not inside the unit square")
    h = Homothety(square)
    if isinstance(obj, Point):
        return h.point(obj)
    if isinstance(obj, Segment):
        return h.segment(obj)
    if isinstance(obj, Rect):
        return h.rect(obj)
    raise TypeError(f"cannot scale {type(obj).__name__}")
