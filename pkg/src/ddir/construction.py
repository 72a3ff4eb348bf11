"""Triangle-free lower-bound constructions with few slopes.

``construct`` builds C_{t,d} by induction on the number of slopes d.  Each
step copies the previous configuration 4t+1 times into a template H, then
iterates ``floor(log2(2t)) + 1`` times: every current probe receives a
scaled copy of H and every probe Q of that copy is cut into 4t layers
holding two touching collinear segments of a fresh slope gamma plus new
strip probes.  ``blowup`` and ``mixed_blowup`` turn the triangle-free
configurations into multisets with clique number 2t and 2t+1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .config import (
    DEFAULT_PLACEMENT,
    HALF,
    Configuration,
    ConfigurationError,
    PlacementPolicy,
    Probe,
    ProbeRecord,
    _root_from_members,
    band_x_min,
    copy_power_records,
    copy_power_sizes,
    empty_configuration,
    records_from_config,
)
from .geometry import UNIT_SQUARE, Homothety, Point, Rect, Segment, Slope, slope_of

DEFAULT_BUDGET = 10**7


class ConstructionError(ValueError):
    pass


class InfeasibleScale(ConstructionError):
    def __init__(self, message: str, estimates: list["StepEstimate"]):
        super().__init__(message)
        self.estimates = estimates


class SlopeTooSteep(ConstructionError):
    pass


class NotBipartite(ConstructionError):
    pass


def default_iterations(t: int) -> int:
    """floor(log2(2t)) + 1, the smallest i with 2**i > 2t."""
    return (2 * t).bit_length()


@dataclass(frozen=True)
class ConstructionParams:
    t: int
    d: int
    copies: Optional[int] = None
    iterations: Optional[int] = None
    placement: PlacementPolicy = DEFAULT_PLACEMENT
    root_margin: Fraction = HALF
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be a positive integer")
        if self.d < 0:
            raise ValueError("d must be nonnegative")
        if self.copies is None:
            object.__setattr__(self, "copies", 4 * self.t + 1)
        if self.iterations is None:
            object.__setattr__(self, "iterations", default_iterations(self.t))
        if self.copies < 1 or self.iterations < 0:
            raise ValueError("copies must be >= 1 and iterations >= 0")
        if not 0 < self.root_margin < 1:
            raise ValueError("root_margin must lie strictly between 0 and 1")
        i, t = self.iterations, self.t
        if not self.truncated:
            # colour count after i rounds is 2t(d-1) + 2t(1 - 2**-i); it must exceed 2td - 1
            assert 2 * t * (1 - Fraction(1, 2**i)) > 2 * t - 1

    @property
    def truncated(self) -> bool:
        return self.copies != 4 * self.t + 1 or self.iterations != default_iterations(self.t)


@dataclass(frozen=True)
class StepEstimate:
    d: int
    template_segments: int
    template_probes: int
    segments: int
    probes: int


def estimate_sizes(params: ConstructionParams) -> list[StepEstimate]:
    """Exact segment/probe counts of every induction step, from the recurrences alone."""
    t = params.t
    per_q_segments = 2 * (4 * t - 1)
    per_q_probes = 1 + 2 * (4 * t - 1)
    s, p = 0, 1
    out = []
    for step in range(1, params.d + 1):
        hs, hp = copy_power_sizes(s, p, params.copies)
        for _ in range(params.iterations):
            s, p = s + p * (hs + hp * per_q_segments), p * hp * per_q_probes
        out.append(StepEstimate(step, hs, hp, s, p))
    return out


def check_budget(params: ConstructionParams) -> list[StepEstimate]:
    est = estimate_sizes(params)
    for e in est:
        if e.template_segments > params.budget:
            raise InfeasibleScale(
                f"construct(t={params.t}, d={params.d}) is not materializable: step d={e.d} needs "
                f"a copied template H with {e.template_segments} segments "
                f"(~{e.template_segments:.2e}), over the budget of {params.budget}",
                est,
            )
        if e.segments > params.budget:
            raise InfeasibleScale(
                f"construct(t={params.t}, d={params.d}) is not materializable: step d={e.d} yields "
                f"{e.segments} segments (~{e.segments:.2e}), over the budget of {params.budget}",
                est,
            )
    return est


def compute_gamma(probes: Iterable[Union[Probe, Rect]], t: int) -> Slope:
    """Minimum aspect ratio over the probes, divided by 4t."""
    rects = [p.rect if isinstance(p, Probe) else p for p in probes]
    if not rects:
        raise ValueError("compute_gamma needs at least one probe")
    return Slope(min(r.aspect_ratio for r in rects) / (4 * t))


def distinct_gamma(gamma: Fraction, existing: Iterable[Fraction]) -> Fraction:
    """Halve gamma until it lies strictly below every positive existing slope."""
    pos = [g for g in existing if g is not None and g > 0]
    floor_ = min(pos, default=None)
    while (floor_ is not None and gamma >= floor_) or gamma in set(existing):
        gamma /= 2
    return gamma


@dataclass(frozen=True)
class LayerGadget:
    """Layers of a probe Q with their slope-gamma segment pairs and new probes.

    ``pillars`` is the (possibly padded) pillar list used for placement;
    ``d_segments[j-1]`` is the pair living in layer ``layers[j]``.
    """

    probe: Rect
    pillars: tuple[Rect, ...]
    layers: tuple[Rect, ...]
    gamma: Slope
    d_segments: tuple[tuple[Segment, Segment], ...]
    top_probe: Rect
    strip_probes: tuple[tuple[Rect, Rect], ...]


def pad_pillars(rect: Rect, root: Rect, pillars: Sequence[Rect], count: int) -> tuple[Rect, list[Rect]]:
    """Carve empty stand-in pillars out of the root when fewer than ``count`` exist.

    Returns the shrunken root and the pillar list; the new pillars continue the
    right-to-left order and leave gaps on both sides.
    """
    missing = count - len(pillars)
    if missing <= 0:
        return root, list(pillars)
    lo, hi = root.x_lo + root.width / 2, root.x_hi
    slot = (hi - lo) / (2 * missing + 1)
    out = list(pillars)
    for q in range(missing):
        k = 2 * missing - 1 - 2 * q
        out.append(Rect(lo + k * slot, lo + (k + 1) * slot, rect.y_lo, rect.y_hi))
    return Rect(root.x_lo, lo, root.y_lo, root.y_hi), out


def build_layer_gadget(Q: Probe, gamma: Slope, t: int) -> LayerGadget:
    """Cut Q into 4t layers and place the D-segment pairs and strip probes.

    In layer j (1 <= j < 4t) the first segment runs from the root across
    pillars 4t..j+1 to a point X in the gap right of pillar j+1; the second
    continues on the same line from X across pillar j only.  Each strip probe
    is a thin band below the end of its segment, starting inside the gap, so
    that it is crossed by that segment and by the pillars to its right.
    """
    if gamma.value is None or gamma.value <= 0:
        raise ConstructionError("gamma must be a positive finite slope")
    g = gamma.value
    n_layers = 4 * t
    rect = Q.rect
    root, pillars = pad_pillars(rect, Q.root, Q.pillars, n_layers + 1)
    if len(pillars) > n_layers + 1:
        xs = (pillars[n_layers + 1].x_hi + pillars[n_layers].x_lo) / 2
    else:
        xs = (rect.x_lo + root.x_hi) / 2

    def gap(j: int) -> tuple[Fraction, Fraction]:
        lo, hi = pillars[j + 1].x_hi, pillars[j].x_lo
        if lo >= hi:
            raise ConstructionError(f"pillars {j + 1} and {j} leave no gap")
        return lo, hi

    h_layer = rect.height / n_layers
    layers = tuple(
        Rect(rect.x_lo, rect.x_hi, rect.y_hi - (j + 1) * h_layer, rect.y_hi - j * h_layer)
        for j in range(n_layers)
    )
    pairs, strips = [], []
    for j in range(1, n_layers):
        gl, gr = gap(j)
        hl, hr = gap(j - 1)
        u, v = gr - gl, hr - hl
        x_join, x_end = gl + 3 * u / 4, hl + 3 * v / 4
        rise = g * (x_end - xs)
        if rise >= h_layer:
            raise SlopeTooSteep(f"gamma={g} climbs {rise} inside a layer of height {h_layer}")
        y_start = layers[j].y_lo + (h_layer - rise) / 2

        def line(x: Fraction) -> Fraction:
            return y_start + g * (x - xs)

        join = Point(x_join, line(x_join))
        d1 = Segment(Point(xs, y_start), join)
        d2 = Segment(join, Point(x_end, line(x_end)))
        s1 = Rect(gl + u / 4, Fraction(1), line(gl + u / 2), line(gl + 5 * u / 8))
        s2 = Rect(hl + v / 4, Fraction(1), line(hl + v / 2), line(hl + 5 * v / 8))
        pairs.append((d1, d2))
        strips.append((s1, s2))
    return LayerGadget(rect, tuple(pillars), layers, gamma, tuple(pairs), layers[0], tuple(strips))


@dataclass(frozen=True)
class GadgetRecord:
    """Where a gadget landed in the final segment list."""

    step: int
    gadget: LayerGadget
    d_indices: tuple[tuple[int, int], ...]


@dataclass
class ConstructionResult:
    config: Configuration
    params: ConstructionParams
    gammas: list[Fraction] = field(default_factory=list)
    gadgets: list[GadgetRecord] = field(default_factory=list)
    estimates: list[StepEstimate] = field(default_factory=list)


def _slope_step(
    segments: list[Segment],
    records: list[ProbeRecord],
    template_segments: Sequence[Segment],
    template: Sequence[ProbeRecord],
    gamma: Slope,
    params: ConstructionParams,
    step: int,
    trace: list[GadgetRecord],
) -> list[ProbeRecord]:
    t, margin = params.t, params.root_margin

    def record(rect: Rect, members: list[int]) -> ProbeRecord:
        return ProbeRecord(rect, _root_from_members(rect, (segments[m] for m in members), margin), members)

    for _ in range(params.iterations):
        fresh: list[ProbeRecord] = []
        for rec in records:
            h = Homothety(params.placement(rec.root, ()))
            offset = len(segments)
            segments.extend(h.segment(s) for s in template_segments)
            for c in template:
                q = Probe(
                    h.rect(c.rect).right_extension(),
                    h.rect(c.root),
                    tuple(h.rect(p) for p in c.pillars),
                )
                q_members = [offset + m for m in c.members] + rec.members
                gadget = build_layer_gadget(q, gamma, t)
                fresh.append(record(gadget.top_probe, list(q_members)))
                idx = []
                for (d1, d2), (s1, s2) in zip(gadget.d_segments, gadget.strip_probes):
                    i1 = len(segments)
                    segments.extend((d1, d2))
                    idx.append((i1, i1 + 1))
                    right_of = lambda strip: [m for m in q_members if band_x_min(segments[m], strip) > strip.x_lo]
                    fresh.append(record(s1, [i1] + right_of(s1)))
                    fresh.append(record(s2, [i1 + 1] + right_of(s2)))
                trace.append(GadgetRecord(step, gadget, tuple(idx)))
        records = fresh
    return records


def construct_detailed(params: ConstructionParams) -> ConstructionResult:
    """Build C_{t,d} and keep the gadget bookkeeping needed for audits."""
    estimates = check_budget(params)
    base = empty_configuration()
    segments: list[Segment] = []
    records = records_from_config(base)
    gammas: list[Fraction] = []
    trace: list[GadgetRecord] = []
    for step in range(1, params.d + 1):
        tpl_segments, tpl = copy_power_records(list(segments), records, params.copies, params.placement)
        gamma = compute_gamma([c.rect for c in tpl], params.t)
        value = distinct_gamma(gamma.value, gammas)
        gammas.append(value)
        records = _slope_step(segments, records, tpl_segments, tpl, Slope(value), params, step, trace)
    probes = tuple(Probe(r.rect, r.root) for r in records)
    config = Configuration(tuple(segments), probes).sorted()
    return ConstructionResult(config, params, gammas, trace, estimates)


def construct(params: ConstructionParams) -> Configuration:
    return construct_detailed(params).config


def blowup(segments: Sequence[Segment], t: int) -> tuple[Segment, ...]:
    """Replace every segment by t identical copies (kept adjacent in the output)."""
    if t < 1:
        raise ValueError("blowup factor must be positive")
    return tuple(s for s in segments for _ in range(t))


@dataclass(frozen=True)
class MixedBlowup:
    segments: tuple[Segment, ...]
    source: tuple[int, ...]  # base index of every output segment
    classes: tuple[tuple[int, ...], ...]  # base indices per slope class
    heavy: tuple[int, ...]  # base indices blown up t+1 times


def mixed_blowup_detailed(t: int, d: int, base: Configuration) -> MixedBlowup:
    from .graph import OddCycle, bipartition, intersection_graph, slope_partition

    if t < 0 or d < 1:
        raise ValueError("need t >= 0 and d >= 1")
    segs = base.segments
    g = intersection_graph(segs)
    classes = slope_partition(g)
    if len(classes) > d:
        raise ConstructionError(f"base has slope number {len(classes)} > d = {d}")
    if not classes:
        return MixedBlowup((), (), (), ())
    try:
        _, heavy = bipartition(g, classes[-1])
    except OddCycle as exc:
        raise NotBipartite(str(exc)) from exc
    heavy_set = set(heavy)
    out, source = [], []
    for i, s in enumerate(segs):
        mult = t + 1 if i in heavy_set else t
        out.extend([s] * mult)
        source.extend([i] * mult)
    return MixedBlowup(tuple(out), tuple(source), tuple(tuple(c) for c in classes), tuple(sorted(heavy)))


def mixed_blowup(t: int, d: int, base: Configuration) -> tuple[Segment, ...]:
    """Blow up by t everywhere except one side of the last slope class, which gets t+1."""
    return mixed_blowup_detailed(t, d, base).segments
