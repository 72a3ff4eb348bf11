"""Configurations: segments in the unit square together with probes.

A probe is a rectangle reaching the right side of the unit square whose
segments all cross it vertically and are pairwise disjoint.  Each probe
carries a root (a left-anchored, segment-free sub-rectangle) and, after
:func:`copy_power`, an ordered list of pillars.  Pillar 0 is the rightmost;
each copying step appends a new pillar to the left of the existing ones.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .geometry import (
    UNIT_SQUARE,
    GeometryError,
    Homothety,
    NotASquare,
    Rect,
    Segment,
    crosses_vertically,
    seg_intersects,
    seg_meets_rect,
    slope_of,
    x_range_in_band,
)

HALF = Fraction(1, 2)


class ConfigurationError(ValueError):
    pass


class RootTooSmall(ConfigurationError):
    pass


class EmptyRoot(ConfigurationError):
    pass


@dataclass(frozen=True)
class Probe:
    rect: Rect
    root: Rect
    pillars: tuple[Rect, ...] = ()


@dataclass(frozen=True)
class Configuration:
    segments: tuple[Segment, ...]
    probes: tuple[Probe, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "probes", tuple(self.probes))

    def probe_segments(self, rect: Rect) -> list[int]:
        """Indices of the segments meeting ``rect`` (the view S(P))."""
        return [i for i, s in enumerate(self.segments) if seg_meets_rect(s, rect)]

    @property
    def slope_number(self) -> int:
        return len({slope_of(s) for s in self.segments})

    def sorted(self) -> "Configuration":
        """Same configuration with probes in canonical (y_lo, x_lo) order."""
        probes = sorted(self.probes, key=lambda p: (p.rect.y_lo, p.rect.x_lo))
        return Configuration(self.segments, tuple(probes))


def empty_configuration() -> Configuration:
    return Configuration((), (Probe(UNIT_SQUARE, UNIT_SQUARE),))


@dataclass(frozen=True)
class Violation:
    clause: str
    probe: Optional[int] = None
    segment: Optional[int] = None
    other: Optional[int] = None
    detail: str = ""

    def __str__(self) -> str:
        where = []
        if self.probe is not None:
            where.append(f"probe {self.probe}")
        if self.segment is not None:
            where.append(f"segment {self.segment}")
        if self.other is not None:
            where.append(f"other {self.other}")
        loc = ", ".join(where)
        return f"{self.clause}({loc}){': ' + self.detail if self.detail else ''}"


def segments_meeting(segments: Sequence[Segment], rects: Sequence[Rect]) -> list[list[int]]:
    """For every rectangle, the indices of segments meeting it.

    Sweeps upward in y so only vertically overlapping pairs reach the exact test.
    """
    order = sorted(range(len(segments)), key=lambda i: segments[i].y_lo)
    rect_order = sorted(range(len(rects)), key=lambda j: rects[j].y_lo)
    out: list[list[int]] = [[] for _ in rects]
    active: list[int] = []
    pos = 0
    for j in rect_order:
        r = rects[j]
        while pos < len(order) and segments[order[pos]].y_lo <= r.y_hi:
            active.append(order[pos])
            pos += 1
        # later rectangles start no lower, so dropped segments never return
        active = [i for i in active if segments[i].y_hi >= r.y_lo]
        out[j] = sorted(i for i in active
                        if segments[i].y_lo <= r.y_hi and seg_meets_rect(segments[i], r))
    return out


def validate(config: Configuration) -> list[Violation]:
    """Check every probe, root and pillar condition; an empty list means valid."""
    out: list[Violation] = []
    segs = config.segments
    for i, s in enumerate(segs):
        if not (UNIT_SQUARE.contains_point(s.a) and UNIT_SQUARE.contains_point(s.b)):
            out.append(Violation("SegmentOutsideUnitSquare", segment=i))

    probes = config.probes
    order = sorted(range(len(probes)), key=lambda j: probes[j].rect.y_lo)
    for pos, j in enumerate(order):
        for k in order[pos + 1:]:
            if probes[k].rect.y_lo > probes[j].rect.y_hi:
                break
            if probes[j].rect.intersects_rect(probes[k].rect):
                out.append(Violation("ProbeDisjointness", probe=j, other=k))

    members = segments_meeting(segs, [p.rect for p in probes])
    for j, p in enumerate(probes):
        r = p.rect
        if not UNIT_SQUARE.contains_rect(r):
            out.append(Violation("ProbeOutsideUnitSquare", probe=j))
        if r.x_hi != 1:
            out.append(Violation("RightSide", probe=j, detail=f"x_hi={r.x_hi}"))
        mem = members[j]
        for i in mem:
            if not crosses_vertically(segs[i], r):
                out.append(Violation("VerticalCrossing", probe=j, segment=i))
        for a_pos, a in enumerate(mem):
            for b in mem[a_pos + 1:]:
                if seg_intersects(segs[a], segs[b]):
                    out.append(Violation("ProbeSegmentsDisjoint", probe=j, segment=a, other=b))

        root = p.root
        if not (root.x_lo == r.x_lo and root.y_lo == r.y_lo and root.y_hi == r.y_hi
                and root.x_hi <= r.x_hi):
            out.append(Violation("RootShape", probe=j))
        for i in mem:
            if seg_meets_rect(segs[i], root):
                out.append(Violation("RootViolation", probe=j, segment=i))

        for a, pil in enumerate(p.pillars):
            if pil.y_lo != r.y_lo or pil.y_hi != r.y_hi or not r.contains_rect(pil):
                out.append(Violation("PillarShape", probe=j, detail=f"pillar {a}"))
            if pil.x_lo <= r.x_lo:
                out.append(Violation("PillarTouchesLeftSide", probe=j, detail=f"pillar {a}"))
            if pil.x_lo < root.x_hi:
                out.append(Violation("PillarMeetsRoot", probe=j, detail=f"pillar {a}"))
            for b in range(a + 1, len(p.pillars)):
                if pil.intersects_rect(p.pillars[b]):
                    out.append(Violation("PillarDisjointness", probe=j, detail=f"pillars {a},{b}"))
            for i in mem:
                if seg_meets_rect(segs[i], pil) and not crosses_vertically(segs[i], pil):
                    out.append(Violation("PillarCrossing", probe=j, segment=i, detail=f"pillar {a}"))
    return out


def band_x_min(s: Segment, rect: Rect) -> Fraction:
    rng = x_range_in_band(s, rect.y_lo, rect.y_hi)
    if rng is None:
        raise ConfigurationError("segment does not reach the probe band")
    return rng[0]


def _root_from_members(rect: Rect, segs: Iterable[Segment], margin: Fraction) -> Rect:
    c_max = min((band_x_min(s, rect) for s in segs), default=None)
    if c_max is None:
        return rect
    if c_max <= rect.x_lo:
        raise EmptyRoot(f"a segment touches the left side of probe {rect.as_tuple()}")
    return Rect(rect.x_lo, rect.x_lo + (c_max - rect.x_lo) * margin, rect.y_lo, rect.y_hi)


def compute_root(config: Configuration, probe_rect: Rect, margin: Fraction = HALF) -> Rect:
    """Maximal segment-free left-anchored sub-rectangle, shrunk by ``margin``.

    A probe met by no segment is its own root.
    """
    segs = [config.segments[i] for i in config.probe_segments(probe_rect)]
    return _root_from_members(probe_rect, segs, margin)


PlacementPolicy = Callable[[Rect, Sequence[Rect]], Rect]


@dataclass(frozen=True)
class CenteredSquare:
    """Square of side ``shrink * min(width, height)`` centred in the free part of a root.

    The free part is the root clipped to the left of every pillar.
    """

    shrink: Fraction = HALF

    def __call__(self, root: Rect, pillars: Sequence[Rect] = ()) -> Rect:
        x_hi = min([root.x_hi] + [p.x_lo for p in pillars])
        w, h = x_hi - root.x_lo, root.height
        if w <= 0:
            raise RootTooSmall(f"root {root.as_tuple()} has no room left of its pillars")
        side = min(w, h) * self.shrink
        x0 = root.x_lo + (w - side) / 2
        y0 = root.y_lo + (h - side) / 2
        return Rect(x0, x0 + side, y0, y0 + side)


DEFAULT_PLACEMENT = CenteredSquare()


def scaled_copy(config: Configuration, square: Rect) -> Configuration:
    """The ``square``-scaled copy: homothetic segments, right-extended probes.

    Roots map to roots of the extended probes; pillars are mapped without extension.
    """
    if not UNIT_SQUARE.contains_rect(square):
        raise GeometryError(f"{square.as_tuple()} is not inside the unit square")
    h = Homothety(square)
    segs = tuple(h.segment(s) for s in config.segments)
    probes = tuple(
        Probe(h.rect(p.rect).right_extension(), h.rect(p.root), tuple(h.rect(i) for i in p.pillars))
        for p in config.probes
    )
    return Configuration(segs, probes)


@dataclass
class ProbeRecord:
    """Mutable bookkeeping used while building: a probe plus its member lists."""

    rect: Rect
    root: Rect
    members: list[int]
    pillars: list[Rect] = field(default_factory=list)
    pillar_members: list[list[int]] = field(default_factory=list)

    def to_probe(self) -> Probe:
        return Probe(self.rect, self.root, tuple(self.pillars))


def records_from_config(config: Configuration) -> list[ProbeRecord]:
    members = segments_meeting(config.segments, [p.rect for p in config.probes])
    return [ProbeRecord(p.rect, p.root, members[j], list(p.pillars)) for j, p in enumerate(config.probes)]


def with_single_pillar(rec: ProbeRecord) -> ProbeRecord:
    """The k = 1 annotation: one pillar covering the probe minus its root."""
    r = rec.rect
    if not rec.members:
        # segment-free probe: left half is the root, right half the pillar
        mid = r.x_lo + r.width / 2
        root = Rect(r.x_lo, mid, r.y_lo, r.y_hi)
        pillar = Rect(mid, r.x_hi, r.y_lo, r.y_hi)
    else:
        root = rec.root
        pillar = Rect(root.x_hi, r.x_hi, r.y_lo, r.y_hi)
    return ProbeRecord(r, root, list(rec.members), [pillar], [list(rec.members)])


def copy_power_records(
    segments: Sequence[Segment],
    base: Sequence[ProbeRecord],
    k: int,
    placement: PlacementPolicy = DEFAULT_PLACEMENT,
) -> tuple[list[Segment], list[ProbeRecord]]:
    if k < 1:
        raise ValueError("k must be a positive integer")
    base1 = [with_single_pillar(rec) for rec in base]
    out_segments = list(segments)
    level = base1
    for _ in range(2, k + 1):
        nxt: list[ProbeRecord] = []
        for rec in level:
            square = placement(rec.root, rec.pillars)
            h = Homothety(square)
            offset = len(out_segments)
            out_segments.extend(h.segment(s) for s in segments)
            for c in base1:
                rect = h.rect(c.rect).right_extension()
                fresh = [offset + m for m in c.members]
                pillars = [Rect(p.x_lo, p.x_hi, rect.y_lo, rect.y_hi) for p in rec.pillars]
                pillars.append(h.rect(c.pillars[0]))
                nxt.append(ProbeRecord(
                    rect,
                    h.rect(c.root),
                    fresh + rec.members,
                    pillars,
                    [list(m) for m in rec.pillar_members] + [fresh],
                ))
        level = nxt
    return out_segments, level


def copy_power(config: Configuration, k: int, placement: PlacementPolicy = DEFAULT_PLACEMENT) -> Configuration:
    """k independent copies of ``config`` chained through probe roots, with k pillars per probe."""
    segs, recs = copy_power_records(config.segments, records_from_config(config), k, placement)
    return Configuration(tuple(segs), tuple(r.to_probe() for r in recs)).sorted()


def copy_power_sizes(n_segments: int, n_probes: int, k: int) -> tuple[int, int]:
    """(|S^(k)|, |P^(k)|) from the copying recurrence, without building anything."""
    s, p = n_segments, n_probes
    for _ in range(2, k + 1):
        s, p = s + p * n_segments, p * n_probes
    return s, p
