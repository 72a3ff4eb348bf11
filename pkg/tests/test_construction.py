from fractions import Fraction

import pytest

from ddir.config import Configuration, Probe, empty_configuration, validate
from ddir.construction import (
    ConstructionParams,
    InfeasibleScale,
    NotBipartite,
    SlopeTooSteep,
    blowup,
    build_layer_gadget,
    compute_gamma,
    construct,
    construct_detailed,
    default_iterations,
    distinct_gamma,
    estimate_sizes,
    mixed_blowup,
    mixed_blowup_detailed,
)
from ddir.geometry import Rect, Segment, Slope, crosses_horizontally, seg_intersects, slope_of
from ddir.graph import clique_number, intersection_graph, is_triangle_free


@pytest.fixture(scope="module")
def c11():
    return construct_detailed(ConstructionParams(1, 1))


def test_default_iterations():
    assert [default_iterations(t) for t in (1, 2, 3, 4, 8)] == [2, 3, 3, 4, 5]
    for t in range(1, 20):
        i = default_iterations(t)
        assert 2 ** i > 2 * t >= 2 ** (i - 1)


def test_base_case():
    assert construct(ConstructionParams(1, 0)) == empty_configuration()
    assert construct(ConstructionParams(3, 0)) == empty_configuration()


def test_c11_sizes_and_structure(c11):
    cfg = c11.config
    assert (len(cfg.segments), len(cfg.probes)) == (48, 49)
    assert cfg.slope_number == 1
    assert validate(cfg) == []
    assert is_triangle_free(intersection_graph(cfg.segments))
    est = c11.estimates[-1]
    assert (est.segments, est.probes) == (48, 49)


def test_gamma_formula():
    assert compute_gamma([Rect.of(0, 1, 0, 1)], 1) == Slope(Fraction(1, 4))
    rects = [Rect.of(0, 1, 0, "1/2"), Rect.of(0, 1, 0, "1/3")]
    assert compute_gamma(rects, 1) == Slope(Fraction(1, 12))
    with pytest.raises(ValueError):
        compute_gamma([], 1)
    assert distinct_gamma(Fraction(1, 4), [Fraction(1, 4)]) == Fraction(1, 8)
    assert distinct_gamma(Fraction(1, 4), [Fraction(1, 2)]) == Fraction(1, 4)


def test_gadget_crossing_pattern(c11):
    for rec in c11.gadgets:
        gad = rec.gadget
        n_layers = len(gad.layers)
        for j, (d1, d2) in enumerate(gad.d_segments, start=1):
            layer = gad.layers[j]
            for s in (d1, d2):
                assert slope_of(s) == gad.gamma
                assert layer.y_lo < s.y_lo and s.y_hi < layer.y_hi
            crossed1 = {a for a, pil in enumerate(gad.pillars) if crosses_horizontally(d1, pil)}
            crossed2 = {a for a, pil in enumerate(gad.pillars) if crosses_horizontally(d2, pil)}
            assert crossed1 == set(range(j + 1, n_layers + 1))
            assert crossed2 == {j}
            # the pair meets in exactly one point
            assert seg_intersects(d1, d2) and d1.b == d2.a


def test_gadget_adjacency_audit(c11):
    g = intersection_graph(c11.config.segments)
    for rec in c11.gadgets:
        for i1, i2 in rec.d_indices:
            assert i2 in g.adj[i1]
            assert not (g.adj[i1] & g.adj[i2])


def test_layer_diagonal_bound(c11):
    # measured over the homothetic image of the template probe, i.e. up to the
    # right edge of pillar 0; right-extension only adds room to the right
    gamma = c11.gammas[0]
    for rec in c11.gadgets:
        gad = rec.gadget
        for layer in gad.layers:
            assert layer.height / (gad.pillars[0].x_hi - layer.x_lo) >= gamma


def test_slope_too_steep():
    q = Probe(Rect.of(0, 1, 0, 1), Rect.of(0, "1/2", 0, 1))
    with pytest.raises(SlopeTooSteep):
        build_layer_gadget(q, Slope(Fraction(10)), 1)


def test_truncated_two_slopes():
    params = ConstructionParams(1, 2, copies=2, iterations=1)
    assert params.truncated
    cfg = construct(params)
    assert validate(cfg) == []
    assert cfg.slope_number == 2
    assert is_triangle_free(intersection_graph(cfg.segments))
    est = estimate_sizes(params)[-1]
    assert (len(cfg.segments), len(cfg.probes)) == (est.segments, est.probes)


def test_t2_sizes_match_recurrence():
    cfg = construct(ConstructionParams(2, 1))
    assert (len(cfg.segments), len(cfg.probes)) == (3374, 3375)
    assert validate(cfg) == []


def test_refusal_reports_estimate():
    with pytest.raises(InfeasibleScale) as err:
        construct(ConstructionParams(1, 2))
    assert err.value.estimates[1].template_segments == 49**5 - 1 == 48 * sum(49**j for j in range(5))
    assert "282475248" in str(err.value)


def test_invalid_params():
    for bad in (dict(t=0, d=1), dict(t=1, d=-1), dict(t=1, d=1, copies=0)):
        with pytest.raises(ValueError):
            ConstructionParams(**bad)


def test_blowup():
    segs = (Segment.of(0, 0, 1, 1), Segment.of(0, 1, 1, 0))
    assert blowup(segs, 1) == segs
    assert clique_number(intersection_graph(blowup(segs[:1], 3))) == 3
    with pytest.raises(ValueError):
        blowup(segs, 0)


def test_blowup_graph_is_graph_blowup(c11):
    g = intersection_graph(c11.config.segments)
    gb = intersection_graph(blowup(c11.config.segments, 2))
    assert sorted(gb.edges()) == sorted(g.blowup(2).edges())


def test_mixed_blowup_t0(c11):
    mb = mixed_blowup_detailed(0, 1, c11.config)
    g = intersection_graph(mb.segments)
    assert len(mb.segments) == len(mb.heavy) == 24
    assert g.m == 0 and clique_number(g) == 1


def test_mixed_blowup_clique_bound(c11):
    for t in (1, 2):
        g = intersection_graph(mixed_blowup(t, 1, c11.config))
        assert clique_number(g) == 2 * t + 1


def test_mixed_blowup_rejects_odd_cycle():
    tri = (Segment.of(0, 0, 1, 0), Segment.of(1, 0, 2, 0), Segment.of("1/2", 0, "3/2", 0))
    with pytest.raises(NotBipartite):
        mixed_blowup(1, 1, Configuration(tri, ()))
