"""Stress demo: a subgradient method on a function where every point is
stationary.

The oracle returns certified values and exact generalized gradients; the
saturation certificate at each iterate exhibits opposite gradient values on
positive measure nearby, so the certified stationarity gap is zero
everywhere the partition reaches.  The optimizer can never certify
progress, no matter where it moves.
"""

from fractions import Fraction

from clarkesat import (
    FiniteSupport,
    NotYetCovered,
    SaturatedFunction,
    build_partition,
    run_subgradient,
    stationarity_gap,
    trajectory_csv,
)

partition = build_partition(30)
sf = SaturatedFunction(partition, FiniteSupport.unit(0))

# Start where the oracle certifies a nonzero gradient, so the method moves
# before the partition's undecided zones freeze it in place.
start = partition.piece_set(1, 0).svc_cover(1).parts[0].hi
trajectory = run_subgradient(sf, (start,), steps=40)

print("t   x (approx)    value interval width   gradient   gap")
certified = 0
for point in trajectory[:12]:
    try:
        gap = stationarity_gap(sf, point.x, Fraction(1, 4), K=0)
        gap_text = str(gap)
        certified += 1
    except NotYetCovered:
        gap_text = "not covered"
    response = point.response
    print(
        f"{point.t:<3d} {float(point.x[0]):<12.6f} {float(response.value.width):<22.2e}"
        f" {str(response.gradient[0]):<9s} {gap_text}"
    )

total = 0
for point in trajectory:
    try:
        stationarity_gap(sf, point.x, Fraction(1, 4), K=0)
        total += 1
    except NotYetCovered:
        pass
print(f"...\ncertified stationary at {total} of {len(trajectory)} iterates")

print()
print("head of the trajectory CSV:")
lines = trajectory_csv(sf, trajectory, r=Fraction(1, 4), K=0).split("\n")
print("\n".join(lines[:5]))
