"""Intersection graphs of segment multisets and the structural queries on them."""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import Point, Segment, Slope, seg_intersects, slope_of

# above this many bits in the common denominator the sweep keeps Fractions
_MAX_SCALE_BITS = 4096


class OddCycle(ValueError):
    def __init__(self, cycle: list[int]):
        super().__init__(f"odd cycle {cycle}")
        self.cycle = cycle


class Graph:
    """Simple undirected graph on vertices 0..n-1 with set adjacency."""

    def __init__(self, n: int, adj: Optional[list[set[int]]] = None):
        self.n = n
        self.adj: list[set[int]] = adj if adj is not None else [set() for _ in range(n)]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("loops are not allowed")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Subgraph on ``vertices``; also returns the new-to-old index map."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = [{index[u] for u in self.adj[v] if u in index} for v in vertices]
        return Graph(len(vertices), adj), list(vertices)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [], [s]
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            out.append(sorted(comp))
        return out

    def blowup(self, t: int) -> "Graph":
        """Vertex v becomes t..t+t-1 block ``v*t + j``: K_t inside, K_{t,t} across edges."""
        g = Graph(self.n * t)
        for v in range(self.n):
            for i in range(t):
                for j in range(i + 1, t):
                    g.add_edge(v * t + i, v * t + j)
        for u, v in self.edges():
            for i in range(t):
                for j in range(t):
                    g.add_edge(u * t + i, v * t + j)
        return g


class IntersectionGraph(Graph):
    """Intersection graph of a segment multiset; vertex i is ``segments[i]``."""

    def __init__(self, segments: Sequence[Segment], adj: list[set[int]]):
        super().__init__(len(segments), adj)
        self.segments = tuple(segments)
        self.slopes = [slope_of(s) for s in self.segments]
        self.classes: list[Slope] = sorted(set(self.slopes), key=Slope.sort_key)
        pos = {s: i for i, s in enumerate(self.classes)}
        self.slope_class = [pos[s] for s in self.slopes]


def _common_denominator(segments: Sequence[Segment]) -> int:
    den = 1
    for s in segments:
        for c in (s.a.x, s.a.y, s.b.x, s.b.y):
            d = c.denominator if isinstance(c, Fraction) else 1
            den = den * d // math.gcd(den, d)
            if den.bit_length() > _MAX_SCALE_BITS:
                return 0
    return den


def _to_integer_grid(segments: Sequence[Segment]) -> Sequence[Segment]:
    den = _common_denominator(segments)
    if den == 0:
        return segments
    conv = lambda c: int(c * den)
    return [Segment(Point(conv(s.a.x), conv(s.a.y)), Point(conv(s.b.x), conv(s.b.y))) for s in segments]


def intersection_graph(segments: Sequence[Segment]) -> IntersectionGraph:
    """Exact intersection graph; identical copies are grouped and tested once."""
    segments = tuple(segments)
    group_of: dict[tuple, int] = {}
    groups: list[list[int]] = []
    for i, s in enumerate(segments):
        k = s.key()
        if k not in group_of:
            group_of[k] = len(groups)
            groups.append([])
        groups[group_of[k]].append(i)
    reps = _to_integer_grid([segments[g[0]] for g in groups])

    group_adj: list[list[int]] = [[] for _ in groups]
    order = sorted(range(len(reps)), key=lambda i: reps[i].x_lo)
    active: list[int] = []
    for i in order:
        s = reps[i]
        xl, yl, yh = s.x_lo, s.y_lo, s.y_hi
        active = [j for j in active if reps[j].x_hi >= xl]
        for j in active:
            r = reps[j]
            if r.y_hi >= yl and r.y_lo <= yh and seg_intersects(r, s):
                group_adj[i].append(j)
                group_adj[j].append(i)
        active.append(i)

    adj: list[set[int]] = [set() for _ in segments]
    for gi, members in enumerate(groups):
        for v in members:
            adj[v].update(members)
            adj[v].discard(v)
            for gj in group_adj[gi]:
                adj[v].update(groups[gj])
    return IntersectionGraph(segments, adj)


def is_triangle_free(g: Graph) -> bool:
    for u in range(g.n):
        for v in g.adj[u]:
            if v > u and not g.adj[u].isdisjoint(g.adj[v]):
                return False
    return True


def twin_classes(g: Graph) -> list[list[int]]:
    """Classes of vertices with equal closed neighbourhoods (mutually adjacent twins)."""
    by_key: dict[frozenset, list[int]] = {}
    for v in range(g.n):
        by_key.setdefault(frozenset(g.adj[v] | {v}), []).append(v)
    return sorted(by_key.values())


def _weighted_max_clique(adj: list[set[int]], w: list[int], vertices: list[int]) -> tuple[int, list[int]]:
    best = [0, []]

    def colour_sort(cand: list[int]) -> tuple[list[int], list[int]]:
        classes: list[list[int]] = []
        for v in cand:
            for cl in classes:
                if adj[v].isdisjoint(cl):
                    cl.append(v)
                    break
            else:
                classes.append([v])
        order, bounds, total = [], [], 0
        for cl in classes:
            total += max(w[v] for v in cl)
            for v in cl:
                order.append(v)
                bounds.append(total)
        return order, bounds

    def expand(cand: list[int], cur_w: int, cur: list[int]) -> None:
        order, bounds = colour_sort(cand)
        for idx in range(len(order) - 1, -1, -1):
            if cur_w + bounds[idx] <= best[0]:
                return
            v = order[idx]
            cur.append(v)
            nw = cur_w + w[v]
            if nw > best[0]:
                best[0], best[1] = nw, list(cur)
            nxt = [u for u in order[:idx] if u in adj[v]]
            if nxt:
                expand(nxt, nw, cur)
            cur.pop()

    start = sorted(vertices, key=lambda v: (-len(adj[v]), v))
    if start:
        expand(start, 0, [])
    return best[0], best[1]


def max_clique(g: Graph) -> list[int]:
    """A maximum clique, found on the quotient by twin classes with multiplicity weights."""
    classes = twin_classes(g)
    rep = {v: ci for ci, cl in enumerate(classes) for v in cl}
    qadj = [{rep[u] for u in g.adj[cl[0]] if rep[u] != ci} for ci, cl in enumerate(classes)]
    weights = [len(cl) for cl in classes]
    quotient = Graph(len(classes), qadj)
    best: list[int] = []
    for comp in quotient.components():
        if sum(weights[c] for c in comp) <= len(best):
            continue
        value, clique = _weighted_max_clique(qadj, weights, comp)
        if value > len(best):
            best = [v for c in clique for v in classes[c]]
    return sorted(best)


def clique_number(g: Graph) -> int:
    return len(max_clique(g))


def slope_partition(g: IntersectionGraph) -> list[list[int]]:
    """Vertices grouped by exact slope, classes ordered by slope value (vertical last)."""
    out: list[list[int]] = [[] for _ in g.classes]
    for v, c in enumerate(g.slope_class):
        out[c].append(v)
    return out


def bipartition(g: Graph, vertices: Optional[Sequence[int]] = None) -> tuple[list[int], list[int]]:
    """Two-colour the subgraph induced by ``vertices`` (BFS from the lowest index)."""
    vs = sorted(range(g.n) if vertices is None else vertices)
    inside = set(vs)
    side: dict[int, int] = {}
    parent: dict[int, Optional[int]] = {}
    for s in vs:
        if s in side:
            continue
        side[s], parent[s] = 0, None
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in sorted(g.adj[v]):
                if u not in inside:
                    continue
                if u not in side:
                    side[u], parent[u] = 1 - side[v], v
                    queue.append(u)
                elif side[u] == side[v]:
                    raise OddCycle(_odd_cycle(parent, u, v))
    part1 = [v for v in vs if side[v] == 0]
    part2 = [v for v in vs if side[v] == 1]
    return part1, part2


def _odd_cycle(parent: dict, u: int, v: int) -> list[int]:
    def path(x):
        out = [x]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    pu, pv = path(u), path(v)
    on_pu = set(pu)
    lca = next(x for x in pv if x in on_pu)
    return pu[: pu.index(lca) + 1] + list(reversed(pv[: pv.index(lca)]))


@dataclass(frozen=True)
class IntervalRep:
    """Closed intervals per vertex; adjacency is interval intersection."""

    intervals: dict

    def vertices(self) -> list[int]:
        return sorted(self.intervals)

    def depth(self, x: Fraction) -> int:
        return sum(1 for lo, hi in self.intervals.values() if lo <= x <= hi)

    def members_at(self, x: Fraction) -> list[int]:
        return sorted(v for v, (lo, hi) in self.intervals.items() if lo <= x <= hi)

    def adjacent(self, u: int, v: int) -> bool:
        (a, b), (c, d) = self.intervals[u], self.intervals[v]
        return a <= d and c <= b

    def graph(self) -> tuple[Graph, list[int]]:
        vs = self.vertices()
        g = Graph(len(vs))
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                if self.adjacent(vs[i], vs[j]):
                    g.add_edge(i, j)
        return g, vs

    def candidate_points(self) -> list[Fraction]:
        """Endpoints plus midpoints of consecutive endpoints; depth is constant between them."""
        ends = sorted({e for iv in self.intervals.values() for e in iv})
        mids = [(a + b) / 2 for a, b in zip(ends, ends[1:])]
        return sorted(ends + mids)

    def clique_number(self) -> int:
        return max((self.depth(x) for x in self.candidate_points()), default=0)


def interval_projection(segments: Sequence[Segment], vertices: Optional[Sequence[int]] = None) -> IntervalRep:
    """Interval representation of a family of parallel segments.

    Each supporting line is projected to the x-axis (y-axis when vertical) and
    distinct lines are translated into disjoint windows, so that two segments
    intersect iff their intervals do.
    """
    vertices = list(range(len(segments))) if vertices is None else list(vertices)
    if len(vertices) != len(segments):
        raise ValueError("one vertex id per segment")
    if not segments:
        return IntervalRep({})
    slopes = {slope_of(s) for s in segments}
    if len(slopes) != 1:
        raise ValueError("interval_projection needs segments of a single slope")
    (slope,) = slopes
    proj = []
    for s in segments:
        if slope.is_vertical:
            line, lo, hi = s.a.x, s.y_lo, s.y_hi
        else:
            line, lo, hi = s.a.y - slope.value * s.a.x, s.x_lo, s.x_hi
        proj.append((line, lo, hi))
    lines = sorted({p[0] for p in proj})
    rank = {c: i for i, c in enumerate(lines)}
    base = min(p[1] for p in proj)
    window = max(p[2] for p in proj) - base + 1
    return IntervalRep({
        v: (lo - base + rank[line] * window, hi - base + rank[line] * window)
        for v, (line, lo, hi) in zip(vertices, proj)
    })


# ---------------------------------------------------------------------------
# export / import


def to_adjacency_text(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def from_adjacency_text(text: str) -> Graph:
    rows = [r.split() for r in text.splitlines() if r.strip() and not r.lstrip().startswith("#")]
    if not rows:
        raise ValueError("empty graph file")
    n, m = int(rows[0][0]), int(rows[0][1])
    edges = [(int(a), int(b)) for a, b in rows[1:]]
    if len(edges) != m:
        raise ValueError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def to_dimacs(g: Graph, comment: str = "") -> str:
    edges = g.edges()
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p edge {g.n} {len(edges)}")
    lines += [f"e {u + 1} {v + 1}" for u, v in edges]
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> Graph:
    g = None
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            g = Graph(int(parts[2]))
        elif parts[0] == "e":
            if g is None:
                raise ValueError(f"line {lineno}: edge before problem line")
            g.add_edge(int(parts[1]) - 1, int(parts[2]) - 1)
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if g is None:
        raise ValueError("no problem line")
    return g


def to_json(g: Graph) -> str:
    doc = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if isinstance(g, IntersectionGraph):
        doc["slope_class"] = g.slope_class
        doc["slopes"] = [str(s) for s in g.classes]
    return json.dumps(doc, separators=(",", ":"))


def from_json(text: str) -> Graph:
    doc = json.loads(text)
    return Graph.from_edges(doc["n"], (tuple(e) for e in doc["edges"]))
