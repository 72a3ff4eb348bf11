"""The copying operation on a three-segment configuration.

The base forces two colours into one of its two probes.  After copying it
into its own roots, some probe of C^(2) has *both* pillars showing two
colours; for 2-fold colourings, both pillars show three.
"""
from ddir.coloring import pillar_adversary, probe_adversary
from ddir.config import Configuration, Probe, compute_root, copy_power, copy_power_sizes, validate
from ddir.geometry import Rect, Segment

a = Segment.of("3/10", "9/10", "1/2", "9/20")
b = Segment.of("1/2", "9/20", "3/10", "1/10")
c = Segment.of("4/5", "1/10", "4/5", "9/10")
bare = Configuration((a, b, c), ())
probes = tuple(Probe(r, compute_root(bare, r)) for r in (Rect.of("1/5", 1, "1/5", "2/5"), Rect.of("1/5", 1, "3/5", "4/5")))
base = Configuration((a, b, c), probes)
print("base valid:", validate(base) == [])
print("base forces 2 colours (t=1):", probe_adversary(base, 1, 2).status)

for k in (1, 2, 3):
    ck = copy_power(base, k)
    print(f"C^({k}): sizes {len(ck.segments)}/{len(ck.probes)} (recurrence {copy_power_sizes(3, 2, k)}),",
          f"valid {validate(ck) == []}, pillars per probe {len(ck.probes[0].pillars)}")

c2 = copy_power(base, 2)
print("pillar property, t=1, s=2:", pillar_adversary(c2, 1, 2).status)
print("pillar property, t=2, s=3, palette 5:", pillar_adversary(c2, 2, 3, 5).status)
print("and it is sharp, t=1, s=3:", pillar_adversary(c2, 1, 3).status)
