"""Acceptance checks, one test per criterion, each with its runtime limit.

The terminal summary prints a PASS/FAIL line per criterion (see conftest.py).
"""
import filecmp
import random
import time
from pathlib import Path

import pytest

from ddir import cli
from ddir.coloring import (
    OPTIMAL,
    SHARED_COLOR,
    UNSAT,
    chromatic_number,
    color_odd,
    color_slope_disjoint,
    interval_color_uncovered,
    omega_uncovered,
    pillar_adversary,
    probe_adversary,
    tfold_chromatic,
    verify_coloring,
)
from ddir.config import copy_power, empty_configuration, segments_meeting, validate
from ddir.construction import ConstructionParams, InfeasibleScale, blowup, construct, mixed_blowup
from ddir.generators import random_ddir, random_graph, random_intervals
from ddir.geometry import seg_intersects
from ddir.graph import (
    Graph,
    clique_number,
    intersection_graph,
    interval_projection,
    is_triangle_free,
    max_clique,
    slope_partition,
)
from ddir.io import dumps, load_config, loads

from helpers import tiny_forcing_config
from oracles import brute_chromatic_number, brute_clique_number, brute_probe_forcing, brute_tfold

ROOT = Path(__file__).resolve().parents[1]


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


@pytest.fixture(scope="module")
def c11():
    return construct(ConstructionParams(1, 1))


def _monochrome_probe_oracle(cfg):
    """Independent check for t=1, s=2: probes sharing segments must be monochromatic."""
    parent = list(range(len(cfg.segments)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for view in segments_meeting(cfg.segments, [p.rect for p in cfg.probes]):
        for v in view[1:]:
            parent[find(v)] = find(view[0])
    segs = cfg.segments
    return any(find(i) == find(j) and seg_intersects(segs[i], segs[j])
               for i in range(len(segs)) for j in range(i))


@pytest.mark.criterion(1, "base case C_{1,0} = (empty, {U}) via the CLI")
def test_c01_base_case(tmp_path):
    with Timer(1):
        out = tmp_path / "c10.json"
        assert cli.main(["construct", "--t", "1", "--d", "0", "--out", str(out)]) == 0
        cfg = load_config(out)
        assert cfg == empty_configuration()
        assert validate(cfg) == []


@pytest.mark.criterion(2, "C_{1,1}: 48 segments, 49 probes, one slope, triangle-free, valid")
def test_c02_c11_structure():
    with Timer(5):
        cfg = construct(ConstructionParams(1, 1))
        assert (len(cfg.segments), len(cfg.probes)) == (48, 49)
        assert cfg.slope_number == 1
        assert is_triangle_free(intersection_graph(cfg.segments))
        assert validate(cfg) == []


@pytest.mark.criterion(3, "every colouring of C_{1,1} has a probe seeing >= 2 colours (a <= 6 and unbounded)")
def test_c03_color_forcing(c11):
    with Timer(120):
        for a in list(range(1, 7)) + [None]:
            assert probe_adversary(c11, 1, 2, a).status == UNSAT, a
        assert _monochrome_probe_oracle(c11)


@pytest.mark.criterion(4, "copy_power(C, 2): some probe has all pillars seeing >= s colours")
def test_c04_pillar_lemma():
    with Timer(300):
        base = tiny_forcing_config()
        g = intersection_graph(base.segments)
        views = segments_meeting(base.segments, [p.rect for p in base.probes])
        # s-forcing of the base, exhaustively: s = 2 for t = 1
        for a in range(1, 4):
            assert brute_probe_forcing(g.n, g.edges(), views, 2, a)
        assert probe_adversary(base, 1, 2, None).status == UNSAT
        assert probe_adversary(base, 2, 3, None).status == UNSAT
        c2 = copy_power(base, 2)
        assert validate(c2) == []
        for a in (1, 2, 3, None):
            assert pillar_adversary(c2, 1, 2, a).status == UNSAT, a
        # t = 2 with s = 3 over every palette up to 6, plus the unbounded palette
        for a in (2, 3, 4, 5, 6, None):
            assert pillar_adversary(c2, 2, 3, a).status == UNSAT, a


@pytest.mark.criterion(5, "omega(blowup(C_{1,1}, t)) = 2t for t = 1, 2, 3")
@pytest.mark.parametrize("t", [1, 2, 3])
def test_c05_blowup_clique(c11, t):
    with Timer(60):
        g = intersection_graph(blowup(c11.segments, t))
        clique = max_clique(g)
        assert all(v in g.adj[u] for u in clique for v in clique if u != v)
        assert len(clique) == 2 * t


@pytest.mark.criterion(6, "slope-disjoint colouring: proper, <= d*omega on 100 random instances")
def test_c06_even_upper_bound():
    rng = random.Random(6)
    with Timer(120):
        for _ in range(100):
            d = rng.randint(1, 3)
            segs = random_ddir(rng, rng.randint(20, 200), d)
            g = intersection_graph(segs)
            w = clique_number(g)
            c = color_slope_disjoint(g)
            assert verify_coloring(g, c) == (True, None)
            assert len(c.colors_used()) <= len(g.classes) * w <= d * w


@pytest.mark.criterion(7, "odd omega: color_odd proper, <= d(omega-1)+1, shared class independent")
def test_c07_odd_upper_bound():
    rng = random.Random(7)
    done = 0
    with Timer(300):
        while done < 100:
            d = rng.randint(1, 3)
            segs = random_ddir(rng, rng.randint(20, 200), d)
            g = intersection_graph(segs)
            w = clique_number(g)
            if w % 2 == 0:
                continue
            done += 1
            c = color_odd(g, w)
            assert verify_coloring(g, c) == (True, None)
            assert len(c.colors_used()) <= d * (w - 1) + 1
            shared = [v for v in range(g.n) if c.color_of(v) == SHARED_COLOR]
            assert all(not (g.adj[v] & set(shared)) for v in shared)
            # every shared-colour vertex is covered: depth >= (w+1)/2 all along its interval
            for cls in slope_partition(g):
                rep = interval_projection([segs[v] for v in cls], cls)
                unc = omega_uncovered(rep, w).uncovered
                assert not unc & set(shared)


@pytest.mark.criterion(8, "interval lemma: proper over {0..omega-1}, no uncovered vertex coloured 0")
def test_c08_interval_lemma():
    rng = random.Random(8)
    with Timer(60):
        for _ in range(200):
            rep = random_intervals(rng, rng.randint(1, 40))
            w = rep.clique_number()
            col = interval_color_uncovered(rep, w)
            g, vs = rep.graph()
            assert all(col[vs[u]] != col[vs[v]] for u, v in g.edges())
            assert set(col.values()) <= set(range(w))
            rpt = omega_uncovered(rep, w)
            assert rpt.check(rep)
            for v in rpt.uncovered:
                assert col[v] != 0
            # at every low point all members are uncovered, hence non-zero
            for x in rep.candidate_points():
                if 2 * rep.depth(x) <= w - 1:
                    assert all(col[v] != 0 for v in rep.members_at(x))


@pytest.mark.criterion(9, "mixed_blowup(1, 1, C_{2,1}): omega = 3 and chi = 3 exactly")
def test_c09_mixed_blowup():
    with Timer(600):
        base = construct(ConstructionParams(2, 1))
        g = intersection_graph(mixed_blowup(1, 1, base))
        assert clique_number(g) == 3
        res = chromatic_number(g)
        assert res.status == OPTIMAL and res.value == 3
        assert verify_coloring(g, res.coloring)[0]


@pytest.mark.criterion(10, "solvers agree with brute force on 50 random graphs; C5 2-fold checks")
def test_c10_solver_oracles():
    rng = random.Random(10)
    with Timer(120):
        for _ in range(50):
            n = rng.randint(0, 10)
            g = random_graph(rng, n, rng.random())
            assert clique_number(g) == brute_clique_number(n, g.edges())
            res = chromatic_number(g)
            assert res.status == OPTIMAL and res.value == brute_chromatic_number(n, g.edges())
        c5 = Graph.cycle(5)
        assert tfold_chromatic(c5, 2, 5).status == "SAT" and brute_tfold(5, c5.edges(), 2, 5)
        assert tfold_chromatic(c5, 2, 4).status == UNSAT and not brute_tfold(5, c5.edges(), 2, 4)


@pytest.mark.criterion(11, "construct(1, 2) at default parameters is refused with the size estimate")
def test_c11_refusal(capsys):
    with Timer(10):
        assert cli.main(["construct", "--t", "1", "--d", "2"]) == 1
        err = capsys.readouterr().err
        expected = 48 * sum(49**j for j in range(5))
        assert expected == 282475248 and str(expected) in err
        with pytest.raises(InfeasibleScale) as exc:
            construct(ConstructionParams(1, 2))
        assert exc.value.estimates[1].template_segments == expected
        readme = (ROOT / "README.md").read_text()
        assert "not materializable" in readme


@pytest.mark.criterion(12, "round trips are exact and repeated runs are byte-identical")
def test_c12_determinism(tmp_path):
    with Timer(60):
        configs = [empty_configuration(), construct(ConstructionParams(1, 1)),
                   construct(ConstructionParams(1, 2, copies=2, iterations=1)),
                   copy_power(tiny_forcing_config(), 3)]
        for cfg in configs:
            text = dumps(cfg)
            assert loads(text) == cfg and dumps(loads(text)) == text
        for run in ("a", "b"):
            d = tmp_path / run
            d.mkdir()
            cli.main(["construct", "--t", "1", "--d", "1", "--out", str(d / "c.json")])
            cli.main(["export-svg", "--in", str(d / "c.json"), "--out", str(d / "c.svg"), "--labels"])
            cli.main(["adversary", "--in", str(d / "c.json"), "--t", "1", "--s", "2", "--out", str(d / "adv.json")])
            cli.main(["chi", "--in", str(d / "c.json"), "--out", str(d / "chi.json")])
        for name in ("c.json", "c.svg", "adv.json", "chi.json"):
            assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False), name
