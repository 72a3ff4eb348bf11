"""Exact colouring machinery and the two upper-bound colourings.

Every exact search here has a node budget.  Running out of budget yields an
explicit ``UNKNOWN`` status together with the best bounds found; a number is
only reported as exact when the search finished.
"""
from __future__ import annotations

import heapq
import os
import sys
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .config import Configuration, segments_meeting
from .graph import (
    Graph,
    IntersectionGraph,
    IntervalRep,
    clique_number,
    intersection_graph,
    interval_projection,
    max_clique,
    slope_partition,
)

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"
OPTIMAL = "OPTIMAL"
SHARED_COLOR = 1  # colour given by color_odd to every vertex coloured 0 in its class
BUDGET_ENV = "DDIR_SOLVER_BUDGET"


class EvenOmega(ValueError):
    pass


class SearchFailed(RuntimeError):
    pass


class _OutOfBudget(Exception):
    pass


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, 5_000_000))


class _Counter:
    def __init__(self, budget: Optional[int]):
        self.limit = default_budget() if budget is None else budget
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise _OutOfBudget


def _deep_recursion(n: int) -> None:
    need = 4 * n + 1000
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


@dataclass(frozen=True)
class Coloring:
    """A t-fold colouring: every vertex gets exactly t colours from 1..palette_size."""

    t: int
    assignment: dict
    palette_size: int

    @classmethod
    def from_colors(cls, colors: Sequence[int], palette_size: Optional[int] = None) -> "Coloring":
        palette = max(colors, default=0) if palette_size is None else palette_size
        return cls(1, {v: frozenset((c,)) for v, c in enumerate(colors)}, palette)

    def color_of(self, v: int) -> int:
        (c,) = self.assignment[v]
        return c

    def colors_used(self) -> set[int]:
        return set().union(*self.assignment.values()) if self.assignment else set()

    def colors_of(self, vertices: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for v in vertices:
            out |= self.assignment[v]
        return out

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "palette": self.palette_size,
            "assignment": {str(v): sorted(cs) for v, cs in sorted(self.assignment.items())},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Coloring":
        return cls(doc["t"], {int(v): frozenset(cs) for v, cs in doc["assignment"].items()}, doc["palette"])


def verify_coloring(g: Graph, c: Coloring) -> tuple[bool, Optional[str]]:
    """Independent audit of a t-fold colouring; returns (ok, first violation)."""
    for v in range(g.n):
        if v not in c.assignment:
            return False, f"vertex {v} is uncoloured"
        cs = c.assignment[v]
        if len(cs) != c.t:
            return False, f"vertex {v} has {len(cs)} colours, expected {c.t}"
        bad = [x for x in cs if not 1 <= x <= c.palette_size]
        if bad:
            return False, f"vertex {v} uses colour {bad[0]} outside 1..{c.palette_size}"
    for u in range(g.n):
        for v in sorted(g.adj[u]):
            if u < v and c.assignment[u] & c.assignment[v]:
                shared = sorted(c.assignment[u] & c.assignment[v])
                return False, f"edge ({u}, {v}) shares colours {shared}"
    return True, None


# ---------------------------------------------------------------------------
# greedy colourings


def greedy_coloring(g: Graph, order: Sequence[int]) -> list[int]:
    """First-fit along ``order``; colours start at 1."""
    colors = [0] * g.n
    for v in order:
        taken = {colors[u] for u in g.adj[v]}
        c = 1
        while c in taken:
            c += 1
        colors[v] = c
    return colors


def dsatur_coloring(g: Graph) -> list[int]:
    colors = [0] * g.n
    seen: list[set[int]] = [set() for _ in range(g.n)]
    heap = [(0, -len(g.adj[v]), v) for v in range(g.n)]
    heapq.heapify(heap)
    while heap:
        neg_sat, _, v = heapq.heappop(heap)
        if colors[v] or -neg_sat != len(seen[v]):
            continue
        c = 1
        while c in seen[v]:
            c += 1
        colors[v] = c
        for u in g.adj[v]:
            if not colors[u] and c not in seen[u]:
                seen[u].add(c)
                heapq.heappush(heap, (-len(seen[u]), -len(g.adj[u]), u))
    return colors


def mcs_order(g: Graph) -> list[int]:
    """Maximum cardinality search; first-fit along it is optimal on chordal graphs."""
    weight = [0] * g.n
    done = [False] * g.n
    heap = [(0, v) for v in range(g.n)]
    order = []
    while heap:
        w, v = heapq.heappop(heap)
        if done[v] or -w != weight[v]:
            continue
        done[v] = True
        order.append(v)
        for u in g.adj[v]:
            if not done[u]:
                weight[u] += 1
                heapq.heappush(heap, (-weight[u], u))
    return order


# ---------------------------------------------------------------------------
# chromatic number


@dataclass
class ChromaticResult:
    status: str
    value: Optional[int]
    lower: int
    upper: int
    coloring: Optional[Coloring]
    nodes: int = 0


def _k_colorable(g: Graph, k: int, clique: Sequence[int], counter: _Counter) -> Optional[list[int]]:
    """DSATUR backtracking with the clique pre-coloured 1..|clique|."""
    n = g.n
    if len(clique) > k:
        return None
    adj = g.adj
    deg = [len(a) for a in adj]
    color = [0] * n
    counts = [[0] * (k + 1) for _ in range(n)]
    sat = [0] * n

    def assign(v: int, c: int) -> None:
        color[v] = c
        for u in adj[v]:
            counts[u][c] += 1
            if counts[u][c] == 1:
                sat[u] += 1

    def unassign(v: int, c: int) -> None:
        color[v] = 0
        for u in adj[v]:
            counts[u][c] -= 1
            if counts[u][c] == 0:
                sat[u] -= 1

    for i, v in enumerate(clique):
        assign(v, i + 1)
    uncolored = {v for v in range(n) if not color[v]}

    def rec(used: int) -> bool:
        counter.tick()
        if not uncolored:
            return True
        v = max(uncolored, key=lambda u: (sat[u], deg[u], -u))
        if sat[v] >= k:
            return False
        uncolored.discard(v)
        for c in range(1, min(used + 1, k) + 1):
            if counts[v][c] == 0:
                assign(v, c)
                if rec(max(used, c)):
                    return True
                unassign(v, c)
        uncolored.add(v)
        return False

    _deep_recursion(n)
    return list(color) if rec(len(clique)) else None


def chromatic_number(g: Graph, budget: Optional[int] = None) -> ChromaticResult:
    """Exact chromatic number with an optimal colouring as certificate."""
    counter = _Counter(budget)
    colors = [0] * g.n
    lower = upper = 0
    exact = True
    for comp in g.components():
        sub, back = g.induced(comp)
        clique = max_clique(sub)
        lb = len(clique)
        best = min((dsatur_coloring(sub), greedy_coloring(sub, mcs_order(sub))), key=max)
        ub = max(best, default=0)
        proven = lb
        try:
            for k in range(lb, ub):
                found = _k_colorable(sub, k, clique, counter)
                if found is not None:
                    best, ub = found, k
                    break
                proven = k + 1
            else:
                proven = ub
        except _OutOfBudget:
            exact = False
        lower, upper = max(lower, proven), max(upper, ub)
        for i, v in enumerate(back):
            colors[v] = best[i]
    cert = Coloring.from_colors(colors, upper)
    if exact:
        return ChromaticResult(OPTIMAL, upper, upper, upper, cert, counter.nodes)
    return ChromaticResult(UNKNOWN, None, lower, upper, cert, counter.nodes)


# ---------------------------------------------------------------------------
# t-fold colouring search with bounded colour views


@dataclass
class SearchResult:
    status: str
    coloring: Optional[Coloring] = None
    nodes: int = 0


def _set_coloring_search(
    g: Graph,
    t: int,
    a: int,
    views: Sequence[Sequence[Sequence[int]]] = (),
    limit: int = 0,
    budget: Optional[int] = None,
) -> SearchResult:
    """Find a t-fold a-colouring such that every view keeps one group at <= ``limit`` colours.

    A view is a list of vertex groups (a probe with one group, or a probe with
    one group per pillar).  Colours are introduced in increasing order, which
    is sound because every constraint is invariant under renaming colours.
    """
    n, adj = g.n, g.adj
    counter = _Counter(budget)
    if t < 1 or a < t:
        return SearchResult(UNSAT if n else SAT, Coloring(t, {}, a) if not n else None)
    member: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    gcount: list[list[dict]] = []
    gsize: list[list[int]] = []
    for p, groups in enumerate(views):
        gcount.append([{} for _ in groups])
        gsize.append([0 for _ in groups])
        for gi, grp in enumerate(groups):
            for v in grp:
                member[v].append((p, gi))
    for p in range(len(views)):
        if views[p] and min(gsize[p]) > limit:
            return SearchResult(UNSAT)

    assign: list[Optional[tuple[int, ...]]] = [None] * n
    forb = [[0] * (a + 2) for _ in range(n)]
    deg = [len(x) for x in adj]

    def views_ok(v: int, X: tuple[int, ...]) -> bool:
        touched: dict[int, dict[int, int]] = {}
        for p, gi in member[v]:
            cnt = gcount[p][gi]
            touched.setdefault(p, {})[gi] = gsize[p][gi] + sum(1 for c in X if c not in cnt)
        for p, new in touched.items():
            if all(new.get(gi, size) > limit for gi, size in enumerate(gsize[p])):
                return False
        return True

    def options(v: int, used: int) -> list[tuple[int, ...]]:
        old = [c for c in range(1, used + 1) if not forb[v][c]]
        out = []
        for r in range(0, t + 1):
            if used + r > a or r > t:
                break
            fresh = tuple(range(used + 1, used + r + 1))
            for combo in combinations(old, t - r):
                X = combo + fresh
                if views_ok(v, X):
                    out.append(X)
        return out

    def apply(v: int, X: tuple[int, ...], sign: int) -> None:
        assign[v] = X if sign > 0 else None
        for u in adj[v]:
            for c in X:
                forb[u][c] += sign
        for p, gi in member[v]:
            cnt = gcount[p][gi]
            for c in X:
                k = cnt.get(c, 0) + sign
                if k:
                    cnt[c] = k
                else:
                    del cnt[c]
            gsize[p][gi] = len(cnt)

    def rec(used: int) -> bool:
        counter.tick()
        best_v, best_opts = -1, None
        for v in range(n):
            if assign[v] is not None:
                continue
            opts = options(v, used)
            if not opts:
                return False
            if best_opts is None or len(opts) < len(best_opts) or (
                len(opts) == len(best_opts) and deg[v] > deg[best_v]
            ):
                best_v, best_opts = v, opts
        if best_opts is None:
            return True
        for X in best_opts:
            apply(best_v, X, 1)
            if rec(max(used, max(X))):
                return True
            apply(best_v, X, -1)
        return False

    _deep_recursion(n)
    try:
        found = rec(0)
    except _OutOfBudget:
        return SearchResult(UNKNOWN, None, counter.nodes)
    if not found:
        return SearchResult(UNSAT, None, counter.nodes)
    col = Coloring(t, {v: frozenset(assign[v]) for v in range(n)}, a)
    return SearchResult(SAT, col, counter.nodes)


def tfold_chromatic(g: Graph, t: int, a: int, budget: Optional[int] = None) -> SearchResult:
    """Decide whether g has a t-fold a-colouring."""
    return _set_coloring_search(g, t, a, budget=budget)


@dataclass
class AdversaryResult:
    status: str
    palette: int
    coloring: Optional[Coloring] = None
    audit: list = field(default_factory=list)  # per probe: sorted colour lists (one per group)
    nodes: int = 0

    def to_json(self) -> dict:
        doc = {"status": self.status, "palette": self.palette, "nodes": self.nodes}
        if self.coloring is not None:
            doc["certificate"] = self.coloring.to_json()
            doc["probe_audit"] = [{"probe": j, "colors": cs} for j, cs in enumerate(self.audit)]
        return doc


def _adversary(config: Configuration, t: int, s: int, a: Optional[int], groups_of, budget) -> AdversaryResult:
    g = intersection_graph(config.segments)
    palette = max(t, t * g.n) if a is None else a
    views = groups_of(config)
    res = _set_coloring_search(g, t, palette, views, s - 1, budget)
    audit = []
    if res.coloring is not None:
        audit = [[sorted(res.coloring.colors_of(grp)) for grp in groups] for groups in views]
    return AdversaryResult(res.status, palette, res.coloring, audit, res.nodes)


def probe_groups(config: Configuration) -> list[list[list[int]]]:
    members = segments_meeting(config.segments, [p.rect for p in config.probes])
    return [[m] for m in members]


def pillar_groups(config: Configuration) -> list[list[list[int]]]:
    out = []
    for p in config.probes:
        out.append(segments_meeting(config.segments, list(p.pillars)) if p.pillars else [[]])
    return out


def probe_adversary(
    config: Configuration, t: int, s: int, a: Optional[int] = None, budget: Optional[int] = None
) -> AdversaryResult:
    """Search for a t-fold a-colouring in which every probe sees at most s-1 colours.

    UNSAT certifies that every t-fold a-colouring has a probe seeing >= s
    colours.  ``a=None`` allows t*n colours, which no colouring can exceed.
    """
    return _adversary(config, t, s, a, probe_groups, budget)


def pillar_adversary(
    config: Configuration, t: int, s: int, a: Optional[int] = None, budget: Optional[int] = None
) -> AdversaryResult:
    """Like probe_adversary, but a probe only counts as forcing if every pillar sees >= s colours."""
    return _adversary(config, t, s, a, pillar_groups, budget)


def adversary_sweep(config: Configuration, t: int, s: int, palettes: Iterable[Optional[int]],
                    budget: Optional[int] = None) -> dict:
    return {a: probe_adversary(config, t, s, a, budget) for a in palettes}


def tfold_from_blowup(c: Coloring, t: int, n: int) -> Coloring:
    """Read a proper colouring of the t-blowup (vertex v*t+j) as a t-fold colouring."""
    return Coloring(t, {v: frozenset(c.color_of(v * t + j) for j in range(t)) for v in range(n)}, c.palette_size)


def blowup_from_tfold(c: Coloring) -> Coloring:
    t = c.t
    out = {}
    for v, cs in c.assignment.items():
        for j, col in enumerate(sorted(cs)):
            out[v * t + j] = frozenset((col,))
    return Coloring(1, out, c.palette_size)


# ---------------------------------------------------------------------------
# interval classes and the upper bounds


def interval_greedy(rep: IntervalRep, vertices: Optional[Iterable[int]] = None, first: int = 1) -> dict:
    """Left-endpoint first-fit; uses exactly clique-number many colours."""
    vs = rep.vertices() if vertices is None else list(vertices)
    order = sorted(vs, key=lambda v: (rep.intervals[v][0], rep.intervals[v][1], v))
    active: list = []
    free: list[int] = []
    nxt = first
    out = {}
    for v in order:
        lo, hi = rep.intervals[v]
        while active and active[0][0] < lo:
            heapq.heappush(free, heapq.heappop(active)[1])
        if free:
            c = heapq.heappop(free)
        else:
            c, nxt = nxt, nxt + 1
        out[v] = c
        heapq.heappush(active, (hi, c))
    return out


def color_slope_disjoint(g: IntersectionGraph) -> Coloring:
    """Colour each slope class optimally on its own palette block."""
    colors = [0] * g.n
    offset = 0
    for cls in slope_partition(g):
        rep = interval_projection([g.segments[v] for v in cls], cls)
        part = interval_greedy(rep, first=offset + 1)
        for v, c in part.items():
            colors[v] = c
        offset = max(part.values(), default=offset)
    return Coloring.from_colors(colors, offset)


@dataclass(frozen=True)
class UncoveredReport:
    omega: int
    witnesses: dict  # vertex -> witness point or None

    @property
    def uncovered(self) -> set[int]:
        return {v for v, x in self.witnesses.items() if x is not None}

    def check(self, rep: IntervalRep) -> bool:
        """Every witness lies in its interval and has depth <= (omega-1)/2."""
        for v, x in self.witnesses.items():
            if x is None:
                continue
            lo, hi = rep.intervals[v]
            if not (lo <= x <= hi and 2 * rep.depth(x) <= self.omega - 1):
                return False
        return True


def _depths(rep: IntervalRep, points: Sequence) -> list[int]:
    los = sorted(lo for lo, _ in rep.intervals.values())
    his = sorted(hi for _, hi in rep.intervals.values())
    return [bisect_right(los, x) - bisect_left(his, x) for x in points]


def omega_uncovered(rep: IntervalRep, omega: int) -> UncoveredReport:
    """For each vertex, a point of its interval covered by at most (omega-1)/2 intervals."""
    pts = rep.candidate_points()
    depth = _depths(rep, pts)
    low = [x for x, dep in zip(pts, depth) if 2 * dep <= omega - 1]
    out = {}
    for v, (lo, hi) in rep.intervals.items():
        i = bisect_left(low, lo)
        out[v] = low[i] if i < len(low) and low[i] <= hi else None
    return UncoveredReport(omega, out)


def _zero_class(rep: IntervalRep, omega: int, covered: list[int]) -> Optional[list[int]]:
    """Pairwise disjoint covered intervals meeting every point of depth omega.

    Dynamic programme over the covered intervals sorted by left endpoint: an
    interval may follow another when it starts strictly later than the other
    ends and no depth-omega point lies strictly between them.
    """
    pts = rep.candidate_points()
    crit = [x for x, dep in zip(pts, _depths(rep, pts)) if dep >= omega]
    if not crit:
        return []
    iv = sorted(covered, key=lambda v: (rep.intervals[v][0], rep.intervals[v][1], v))

    def none_in(lo, hi, closed: bool) -> bool:
        # no critical point in (lo, hi) or [lo, hi]
        i = bisect_left(crit, lo) if closed else bisect_right(crit, lo)
        return i >= len(crit) or (crit[i] > hi if closed else crit[i] >= hi)

    parent: dict[int, Optional[int]] = {}
    for k, v in enumerate(iv):
        lo, hi = rep.intervals[v]
        if crit[0] >= lo:
            parent[v] = None
            continue
        for u in iv[:k]:
            if u in parent:
                ulo, uhi = rep.intervals[u]
                if uhi < lo and none_in(uhi, lo, closed=False):
                    parent[v] = u
                    break
    for v in iv:
        if v in parent and crit[-1] <= rep.intervals[v][1]:
            chain = []
            while v is not None:
                chain.append(v)
                v = parent[v]
            return chain[::-1]
    return None


def sweep_color_uncovered(rep: IntervalRep, omega: int, uncovered: set) -> Optional[dict]:
    """Left-endpoint sweep: covered vertices take 0 when free, uncovered ones the smallest free non-zero colour.

    Returns None when an uncovered vertex finds no free non-zero colour.
    """
    order = sorted(rep.intervals, key=lambda v: (rep.intervals[v][0], rep.intervals[v][1], v))
    active: list = []
    free = set(range(omega))
    out = {}
    for v in order:
        lo, hi = rep.intervals[v]
        while active and active[0][0] < lo:
            free.add(heapq.heappop(active)[1])
        choices = sorted(free - {0}) if v in uncovered else ([0] if 0 in free else sorted(free))
        if not choices:
            return None
        out[v] = choices[0]
        free.discard(choices[0])
        heapq.heappush(active, (hi, choices[0]))
    return out


def interval_color_uncovered(rep: IntervalRep, omega: int) -> dict:
    """Proper colouring with colours 0..omega-1 where no omega-uncovered vertex gets 0."""
    if rep.clique_number() > omega:
        raise SearchFailed(f"interval clique number exceeds omega={omega}")
    unc = omega_uncovered(rep, omega).uncovered
    out = sweep_color_uncovered(rep, omega, unc)
    if out is not None:
        return out
    zero = _zero_class(rep, omega, sorted(set(rep.intervals) - unc))
    if zero is None:
        raise SearchFailed("no admissible colour-0 class exists")
    zero_set = set(zero)
    rest = IntervalRep({v: iv for v, iv in rep.intervals.items() if v not in zero_set})
    out = interval_greedy(rest, first=1)
    out.update({v: 0 for v in zero})
    if max(out.values(), default=0) > omega - 1:
        raise SearchFailed("colour-0 class did not lower the clique number")
    return out


def color_odd(g: IntersectionGraph, omega: Optional[int] = None) -> Coloring:
    """Colouring with at most d(omega-1)+1 colours for odd clique number omega.

    Colour 1 is shared by the vertices coloured 0 inside their slope class;
    class i uses colours 2 + i(omega-1) .. 1 + (i+1)(omega-1).
    """
    w = clique_number(g) if omega is None else omega
    if w % 2 == 0:
        raise EvenOmega(f"clique number {w} is even; use color_slope_disjoint")
    colors = [0] * g.n
    classes = slope_partition(g)
    for i, cls in enumerate(classes):
        rep = interval_projection([g.segments[v] for v in cls], cls)
        part = interval_color_uncovered(rep, w)
        for v, c in part.items():
            colors[v] = SHARED_COLOR if c == 0 else 1 + i * (w - 1) + c
    return Coloring.from_colors(colors, len(classes) * (w - 1) + 1)
