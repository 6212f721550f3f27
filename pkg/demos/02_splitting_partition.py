"""The splitting partition: countably many members, each meeting every
interval in positive measure, with a positive-measure complement too.

Builds a prefix of the staged construction, inspects the stage layout,
queries membership and certified measures, produces splitting certificates,
and round-trips the whole object through its text serialization.
"""

from fractions import Fraction

from clarkesat import (
    Interval,
    build_partition,
    enumerated_interval,
    loads,
    saves,
    splitting_certificate,
    splitting_certificate_auto,
)

partition = build_partition(12)

print("the first stages: each plants n+1 fat Cantor sets inside a gap of I_n")
print("    n  enumerated interval      gap                          pieces")
for record in partition.stages[:8]:
    target = enumerated_interval(record.n)
    print(f"  {record.n:3d}  {str(target):22s}  {str(record.gap):27s}  {record.piece_count}")

print()
print("membership at a few points (depth 4):")
witness = partition.piece_set(1, 0).svc_cover(1).parts[0].hi
for x in (witness, Fraction(0), Fraction(1, 2)):
    answer = partition.membership(x, depth=4)
    print(f"  x = {x}: kind={answer.kind} member={answer.member_index} stage={answer.stage}")

print()
print("certified member measures inside [0, 1) at tolerance 2^-12:")
tol = Fraction(1, 2**12)
window = Interval.closed(0, 1)
for k in range(4):
    bound = partition.measure_in(k, window, tol)
    print(f"  member {k}: {bound}")

print()
print("splitting certificates: positive mass for the member AND its complement")
for k in (0, 1, 2):
    cert = splitting_certificate(partition, k, Interval.open(0, 1))
    print(cert.render())

print()
print("a window the 12-stage prefix cannot reach is extended automatically:")
tiny = Interval.open(Fraction(11, 64), Fraction(13, 64))
cert, grown = splitting_certificate_auto(partition, 3, tiny)
print(f"  grew to {grown.stage_count} stages; certificate stage {cert.stage}:")
print(cert.render())

print()
text = saves(partition)
print(f"serialization round-trip: {len(text)} bytes,",
      "identical" if saves(loads(text)) == text else "BROKEN")
