"""Small fixed instances shared by several test modules."""
from ddir.config import Configuration, Probe, compute_root
from ddir.geometry import Rect, Segment


def tiny_forcing_config() -> Configuration:
    """Three segments and two probes; every proper colouring shows 2 colours in some probe.

    A and B touch (so they differ); C crosses both probes, so the upper probe
    sees {A, C} and the lower one {B, C}; one of them has two colours.
    """
    a = Segment.of("3/10", "9/10", "1/2", "9/20")
    b = Segment.of("1/2", "9/20", "3/10", "1/10")
    c = Segment.of("4/5", "1/10", "4/5", "9/10")
    segs = (a, b, c)
    bare = Configuration(segs, ())
    rects = (Rect.of("1/5", 1, "1/5", "2/5"), Rect.of("1/5", 1, "3/5", "4/5"))
    return Configuration(segs, tuple(Probe(r, compute_root(bare, r)) for r in rects))
