"""Why C_{t,d} stops being buildable after d = 1."""
from ddir.construction import ConstructionParams, InfeasibleScale, construct, estimate_sizes

for t, d in ((1, 1), (2, 1), (3, 1), (1, 2), (2, 2)):
    params = ConstructionParams(t, d, budget=10**40)
    last = estimate_sizes(params)[-1]
    print(f"C_({t},{d}): template H {last.template_segments:.3e} segments, result {last.segments:.3e} segments")

try:
    construct(ConstructionParams(1, 2))
except InfeasibleScale as exc:
    print("refused:", exc)

small = construct(ConstructionParams(1, 2, copies=2, iterations=1))
print(f"truncated (copies=2, iterations=1): {len(small.segments)} segments, slope number {small.slope_number}")
