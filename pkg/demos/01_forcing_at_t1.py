"""Build C_{1,1} and watch it force two colours into some probe.

Run: python3 demos/01_forcing_at_t1.py [output.svg]
"""
import sys

from ddir.coloring import probe_adversary
from ddir.config import validate
from ddir.construction import ConstructionParams, construct_detailed
from ddir.graph import intersection_graph, is_triangle_free
from ddir.svg import render_svg

res = construct_detailed(ConstructionParams(t=1, d=1))
cfg = res.config
g = intersection_graph(cfg.segments)
print(f"C_(1,1): {len(cfg.segments)} segments, {len(cfg.probes)} probes, slope gamma = {res.gammas[0]}")
print(f"valid: {validate(cfg) == []}, triangle-free: {is_triangle_free(g)}, edges: {g.m}")

# Each layer gadget contributes three touching pairs; the adversary tries to
# colour everything while keeping every probe monochromatic.
print(f"{len(res.gadgets)} gadgets, D-pairs per gadget: {len(res.gadgets[0].d_indices)}")
for a in (1, 2, 3, None):
    out = probe_adversary(cfg, t=1, s=2, a=a)
    label = "unbounded" if a is None else a
    print(f"  palette {label}: {out.status} after {out.nodes} search nodes")

if len(sys.argv) > 1:
    d_segments = [i for rec in res.gadgets for pair in rec.d_indices for i in pair]
    with open(sys.argv[1], "w") as fh:
        fh.write(render_svg(cfg, labels=True, highlight=d_segments[:6]))
    print(f"drawing written to {sys.argv[1]}")
