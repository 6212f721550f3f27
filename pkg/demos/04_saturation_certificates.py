"""Certificates that the gradient hull is everywhere maximal.

Produces saturation certificates in one and two dimensions, the linear
independence fingerprint, the exact norm witness, and the ball-shift
construction that relocates the gradient hull to an arbitrary center.
"""

from fractions import Fraction

from clarkesat import (
    FiniteSupport,
    SaturatedFunction,
    build_partition,
    certify_saturation,
    independence_fingerprint,
    isometry_witness,
    shift_to_ball,
)

partition = build_partition(40)

print("d = 1, unit coefficient on index 0: the hull is the full interval [-1, 1]")
sf = SaturatedFunction(partition, FiniteSupport.unit(0))
cert = certify_saturation(sf, (Fraction(1, 2),), Fraction(1, 4), K=1)
print(cert.render())
print(f"replay check: {cert.check()}")

print()
print("d = 2, coefficient 2 on index 3: all four corners of [-2, 2]^2")
sf2 = SaturatedFunction(partition, FiniteSupport.of({3: 2}), d=2)
cert2 = certify_saturation(sf2, (Fraction(1, 2), Fraction(1, 2)), Fraction(1, 2), K=3)
for witness in sorted(cert2.vertices, key=lambda w: (w.k, w.vertex)):
    if witness.k == 3:
        print(f"  vertex {witness.vertex} -> value {witness.value},"
              f" product measure >= {witness.product_lower_bound}")
print(f"hull: {cert2.hull_intervals()}  replay check: {cert2.check()}")

print()
print("independence fingerprint with K = 8 (must be the identity):")
for row in independence_fingerprint(partition, 8):
    print("  " + " ".join(f"{v:2d}" for v in row))

print()
print("exact norm witness for coefficients (3, -5, 2):")
mixed = SaturatedFunction(partition, FiniteSupport.of({0: 3, 1: -5, 2: 2}), d=2)
witness = isometry_witness(mixed, K=2)
print(f"  point {witness.point}")
print(f"  sampled gradient {witness.gradient}, sup norm {witness.sup_norm}")

print()
print("ball shift: gradient hull centered at p = 2 with radius r = 3")
shifted = shift_to_ball(SaturatedFunction(partition, FiniteSupport.of({0: 3})), (Fraction(2),), Fraction(3))
cert3 = certify_saturation(shifted, (Fraction(1, 2),), Fraction(1, 4), K=0)
print(f"  certified values: {sorted(v[0] for v in cert3.certified_values())}")
print(f"  hull: {cert3.hull_intervals()}  (the interval [-1, 5])")
