"""Evaluating the function family with certified error intervals.

Shows single-index functions, finite combinations, a bounded generator
source, per-coordinate gradient sampling, and the steered Lipschitz lower
bound that nearly attains the exact norm.
"""

from fractions import Fraction

from clarkesat import (
    FiniteSupport,
    SaturatedFunction,
    build_partition,
    eval_f,
    eval_f1,
    export_samples,
    lipschitz_lower_bound,
    lipschitz_norm,
    ones_generator,
    sample_gradient,
)

partition = build_partition(30)
tol = Fraction(1, 10**6)

print("f_0 on a small grid (base point 1/2), certified to width 1e-6:")
for i in range(1, 8):
    x = Fraction(i, 8)
    bound = eval_f1(partition, 0, Fraction(1, 2), x, tol)
    print(f"  f_0({x}) in {bound}")

print()
mixed = SaturatedFunction(partition, FiniteSupport.of({0: 3, 1: -5, 2: 2}))
print(f"mixed combination with coefficients 3, -5, 2: exact norm {lipschitz_norm(mixed)}")
for x in (Fraction(1, 3), Fraction(2, 3)):
    print(f"  f({x}) in {eval_f(mixed, (x,), tol)}")

print()
print("steered Lipschitz lower bounds (target: 0.95 * norm):")
for mu in (FiniteSupport.unit(0), mixed.mu):
    sf = SaturatedFunction(partition, mu)
    steered = lipschitz_lower_bound(sf)
    print(f"  norm {lipschitz_norm(sf)}: certified quotient {steered} ~ {float(steered):.4f}")

print()
print("a generator source: every coefficient 1, declared sup norm 1")
ones = SaturatedFunction(partition, ones_generator())
for t in (Fraction(1, 100), Fraction(1, 10000)):
    bound = eval_f(ones, (Fraction(2, 3),), t)
    print(f"  tol {t}: width {bound.width} (bounds nest as tol shrinks)")

print()
print("gradient sampling in d = 3 (None would mean undecided):")
sf3 = SaturatedFunction(partition, mixed.mu, d=3)
witness = partition.piece_set(3, 2).svc_cover(1).parts[0].hi  # a point of A_3
print(f"  at ({witness}, 1/2, {witness}): {sample_gradient(sf3, (witness, Fraction(1, 2), witness), 4)}")

print()
print("CSV export of samples:")
print(export_samples(
    SaturatedFunction(partition, FiniteSupport.unit(0)),
    [(Fraction(1, 2),), (Fraction(5, 8),), (witness,)],
    tol,
), end="")
