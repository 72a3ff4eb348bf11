"""Seeded random instances for audits and demos."""
from __future__ import annotations

import random
from fractions import Fraction

from .geometry import Point, Segment
from .graph import Graph, IntervalRep

SLOPE_POOL = (None, Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-2), Fraction(3))


def random_ddir(rng: random.Random, n: int, d: int, lines_per_class: int = 4, den: int = 24) -> list[Segment]:
    """n segments on d slopes.

    Segments of one slope are spread over a few shared lines so that each
    class has collinear overlaps and a non-trivial interval structure.
    """
    slopes = rng.sample(SLOPE_POOL, d)
    offsets = {sl: [Fraction(rng.randrange(den), den) for _ in range(lines_per_class)] for sl in slopes}
    out = []
    for _ in range(n):
        sl = rng.choice(slopes)
        c = rng.choice(offsets[sl])
        lo = rng.randrange(den)
        hi = rng.randrange(lo + 1, lo + 1 + den // 3)
        u, v = Fraction(lo, den), Fraction(hi, den)
        if sl is None:
            out.append(Segment(Point(c, u), Point(c, v)))
        else:
            out.append(Segment(Point(u, c + sl * u), Point(v, c + sl * v)))
    return out


def random_intervals(rng: random.Random, n: int, den: int = 40, max_len: int = 12) -> IntervalRep:
    ivs = {}
    for v in range(n):
        lo = rng.randrange(den)
        ivs[v] = (Fraction(lo, 4), Fraction(lo + rng.randrange(max_len + 1), 4))
    return IntervalRep(ivs)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
