"""Blowups of C_{1,1} and the mixed blowup of C_{2,1}."""
import time

from ddir.coloring import chromatic_number
from ddir.construction import ConstructionParams, blowup, construct, mixed_blowup_detailed
from ddir.graph import clique_number, intersection_graph

c11 = construct(ConstructionParams(1, 1))
for t in (1, 2, 3):
    g = intersection_graph(blowup(c11.segments, t))
    print(f"t={t}: {g.n} vertices, omega = {clique_number(g)}")

start = time.perf_counter()
base = construct(ConstructionParams(2, 1))
mb = mixed_blowup_detailed(1, 1, base)
g = intersection_graph(mb.segments)
res = chromatic_number(g)
print(f"mixed blowup of C_(2,1): {g.n} vertices, {len(mb.heavy)} doubled, "
      f"omega = {clique_number(g)}, chi = {res.value} ({res.status}), {time.perf_counter() - start:.1f}s")
