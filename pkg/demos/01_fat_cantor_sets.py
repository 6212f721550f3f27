"""Fat Cantor sets: positive-measure Cantor sets with certified covers.

Walks through the canonical construction over [0,1]: finite-depth covers,
their exact measures, tri-state membership, certified window measures, and
gap finding against a family of sets.
"""

from fractions import Fraction

from clarkesat import FatCantorSet, Interval, find_gap, svc_cover, svc_membership, svc_measure_in

canonical = FatCantorSet.canonical()

print("depth-by-depth covers of the canonical set over [0,1]")
print("depth  pieces  cover measure         (= 1/2 + 2^-(depth+1))")
for depth in range(8):
    cover = svc_cover(canonical, depth)
    print(f"{depth:5d}  {len(cover):6d}  {str(cover.measure()):>12}")

print()
print("the first two covers in full:")
for depth in (1, 2):
    print(f"  depth {depth}: {svc_cover(canonical, depth)}")

print()
print("membership is tri-state and never retracted at deeper inspection:")
for x, depth in ((Fraction(1, 2), 1), (Fraction(0), 5), (Fraction(1, 3), 1), (Fraction(1, 3), 6)):
    print(f"  x = {x} at depth {depth}: {svc_membership(canonical, x, depth).value}")

print()
print("certified measure of the set inside [0, 3/8] (true value 1/4):")
for depth in (1, 3, 6, 10):
    bound = svc_measure_in(canonical, Interval.closed(0, Fraction(3, 8)), depth)
    print(f"  depth {depth:2d}: {bound}  width {bound.width}")

print()
print("gap finding: the longest open interval avoiding a family of sets")
second = FatCantorSet(Interval.open(Fraction(3, 8), Fraction(5, 8)))
gap, depth = find_gap([canonical], Interval.open(0, 1))
print(f"  avoiding the canonical set inside (0,1): {gap} at depth {depth}")
gap, depth = find_gap([canonical, second], Interval.open(0, 1))
print(f"  avoiding both sets inside (0,1):         {gap} at depth {depth}")
gap, depth = find_gap([canonical], Interval.open(0, Fraction(3, 8)))
print(f"  inside the left branch (0, 3/8):         {gap} at depth {depth}")
