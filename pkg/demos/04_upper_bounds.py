"""Both upper-bound colourings on a random 3-slope instance."""
import random

from ddir.coloring import color_odd, color_slope_disjoint, verify_coloring
from ddir.generators import random_ddir
from ddir.graph import clique_number, intersection_graph

rng = random.Random(2024)
while True:
    g = intersection_graph(random_ddir(rng, 150, 3))
    w = clique_number(g)
    if w % 2:
        break
d = len(g.classes)
print(f"{g.n} segments on {d} slopes, {g.m} intersections, omega = {w}")

even = color_slope_disjoint(g)
print(f"slope-disjoint: {len(even.colors_used())} colours (bound d*omega = {d * w}), proper: {verify_coloring(g, even)[0]}")

odd = color_odd(g)
shared = sum(1 for v in range(g.n) if odd.color_of(v) == 1)
print(f"odd-omega colouring: {len(odd.colors_used())} colours (bound d(omega-1)+1 = {d * (w - 1) + 1}), "
      f"proper: {verify_coloring(g, odd)[0]}, {shared} vertices share colour 1")
