"""Machine-checkable certificates about the function family.

A saturation certificate pins down, for every coefficient index up to a
truncation K and every sign pattern of the coordinates, a product set of
positive measure inside a box around the query point on which the gradient
is exactly the coefficient times the sign pattern.  Every listed bound is a
strict rational inequality of the form lambda(A_j within window) >= rho *
piece length > 0, so the certificate can be replayed without floating
point.  The full gradient ball is never computed, only inner-approximated;
the matching outer bound is the Lipschitz norm ball, known analytically.

Certificates are monotone: more stages or depth never invalidate them.
Witness searches walk the built stage records rather than sampling, so
results are deterministic and hits are guaranteed once the partition
reaches far enough.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import NotYetCovered
from .functions import SaturatedFunction, ShiftedSaturatedFunction, eval_g
from .partition import RETAINED, SplittingPartition, first_index_inside
from .rationals import Interval, ZERO, format_rational, rational


@dataclass(frozen=True)
class CoordinateWitness:
    """lambda(A_member within window) >= lower_bound > 0, via one whole piece."""

    member: int
    stage: int
    piece: int
    window: Interval
    lower_bound: Fraction


@dataclass(frozen=True)
class VertexWitness:
    """Positive-measure witness that the gradient value mu_k * vertex occurs."""

    k: int
    coefficient: Fraction
    vertex: tuple[int, ...]
    coordinates: tuple[CoordinateWitness, ...]

    @property
    def value(self) -> tuple[Fraction, ...]:
        return tuple(self.coefficient * v for v in self.vertex)

    @property
    def product_lower_bound(self) -> Fraction:
        bound = Fraction(1)
        for witness in self.coordinates:
            bound *= witness.lower_bound
        return bound


@dataclass(frozen=True)
class SaturationCertificate:
    """Inner approximation of the gradient hull at a point.

    The conclusion is that the convex hull of the certified gradient values
    contains the cube of radius m = max over k <= K of |mu_k|, shifted by
    the affine part when present.  Truncation honesty: m is reported for
    the inspected prefix only, never silently promoted to the full norm.
    """

    point: tuple[Fraction, ...]
    radius: Fraction
    truncation: int
    m: Fraction
    vertices: tuple[VertexWitness, ...]
    shift: tuple[Fraction, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.shift is None:
            object.__setattr__(self, "shift", tuple(ZERO for _ in self.point))

    @property
    def d(self) -> int:
        return len(self.point)

    def hull_intervals(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Per-coordinate hull [shift_i - m, shift_i + m]."""
        return tuple((p - self.m, p + self.m) for p in self.shift)

    def certified_values(self) -> set[tuple[Fraction, ...]]:
        return {
            tuple(v + p for v, p in zip(witness.value, self.shift))
            for witness in self.vertices
        }

    def check(self) -> bool:
        """Replay the certificate: positivity plus exact hull containment.

        For d <= 3 every vertex of the claimed cube is matched against the
        certified values exhaustively; beyond that the per-coordinate
        product rule applies because the certified set of any coefficient
        attaining m carries every sign pattern.
        """
        for witness in self.vertices:
            if witness.product_lower_bound <= 0:
                return False
            for coord in witness.coordinates:
                if coord.lower_bound <= 0:
                    return False
        if self.m == 0:
            return True
        attaining = [
            w.k for w in self.vertices if abs(w.coefficient) == self.m
        ]
        if not attaining:
            return False
        k_star = attaining[0]
        values = self.certified_values()
        if self.d <= 3:
            for corner in product((-1, 1), repeat=self.d):
                target = tuple(
                    p + self.m * c for p, c in zip(self.shift, corner)
                )
                if target not in values:
                    return False
            return True
        patterns = {
            w.vertex for w in self.vertices if w.k == k_star
        }
        return len(patterns) == 2**self.d

    def render(self) -> str:
        lines = [
            "saturation certificate",
            f"  point: ({', '.join(format_rational(c) for c in self.point)})",
            f"  radius: {format_rational(self.radius)}"
            f"  truncation: {self.truncation}"
            f"  m: {format_rational(self.m)}",
        ]
        if any(p != 0 for p in self.shift):
            lines.append(
                f"  shift: ({', '.join(format_rational(p) for p in self.shift)})"
            )
        for witness in sorted(self.vertices, key=lambda w: (w.k, w.vertex)):
            pattern = ",".join("+1" if v > 0 else "-1" for v in witness.vertex)
            lines.append(
                f"  k={witness.k} vertex=({pattern})"
                f" value=({', '.join(format_rational(v) for v in witness.value)})"
                f" measure>={format_rational(witness.product_lower_bound)}"
            )
            for i, coord in enumerate(witness.coordinates):
                lines.append(
                    f"    coordinate {i + 1}: member {coord.member}"
                    f" stage {coord.stage} piece {coord.piece}"
                    f" window {coord.window}"
                    f" lambda>={format_rational(coord.lower_bound)}"
                )
        hull = self.hull_intervals()
        hull_text = " x ".join(
            f"[{format_rational(lo)},{format_rational(hi)}]" for lo, hi in hull
        )
        lines.append(f"  conclusion: gradient hull contains {hull_text}")
        return "\n".join(lines)


def _member_witness(
    partition: SplittingPartition, member: int, window: Interval
) -> CoordinateWitness:
    """A whole built piece of A_member inside the window, smallest stage first."""
    for record in partition.stages_overlapping(window):
        piece = record.piece_for_member(member)
        if piece is None:
            continue
        host = record.piece_host(piece)
        if window.contains_interval(host):
            return CoordinateWitness(
                member, record.n, piece, window, RETAINED * host.length
            )
    needed = first_index_inside(window, max(member, 1))
    raise NotYetCovered(
        f"no built piece of member {member} inside {window};"
        f" build at least {needed} stages",
        needed_stage=needed,
    )


def certify_saturation(
    sf: SaturatedFunction | ShiftedSaturatedFunction,
    x: Sequence[Fraction],
    r: Fraction,
    K: int,
) -> SaturationCertificate:
    """Certify that the gradient hull at x contains the truncated ball.

    Works inside the box of 1-norm radius r around x: each coordinate gets
    the window (x_i - r/d, x_i + r/d), which must stay inside the domain.
    For every k <= K and every sign pattern, the per-coordinate witnesses
    multiply into a positive-measure product set on which the gradient is
    exactly mu_k * pattern.
    """
    if isinstance(sf, ShiftedSaturatedFunction):
        base = certify_saturation(sf.base, x, r, K)
        return SaturationCertificate(
            base.point, base.radius, base.truncation, base.m, base.vertices, sf.shift
        )
    x = tuple(rational(c) for c in x)
    r = rational(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    if K < 0:
        raise ValueError("truncation must be >= 0")
    if not sf.contains_point(x):
        raise ValueError(f"point {x} is outside the domain box")
    half = r / sf.d
    windows = []
    for side, c in zip(sf.domain, x):
        window = Interval.open(c - half, c + half)
        if not side.contains_interval(window):
            raise ValueError(
                f"the radius-{r} box around {c} leaves the domain side {side}"
            )
        windows.append(window)
    witness_cache: dict[tuple[int, int], CoordinateWitness] = {}

    def coordinate_witness(member: int, i: int) -> CoordinateWitness:
        key = (member, i)
        if key not in witness_cache:
            witness_cache[key] = _member_witness(sf.partition, member, windows[i])
        return witness_cache[key]

    vertices = []
    for k in range(K + 1):
        coeff = sf.mu.coefficient(k)
        for pattern in product((-1, 1), repeat=sf.d):
            coords = tuple(
                coordinate_witness(2 * k + 1 if v > 0 else 2 * k, i)
                for i, v in enumerate(pattern)
            )
            vertices.append(VertexWitness(k, coeff, pattern, coords))
    m = max((abs(sf.mu.coefficient(k)) for k in range(K + 1)), default=ZERO)
    return SaturationCertificate(x, r, K, m, tuple(vertices))


def independence_fingerprint(
    partition: SplittingPartition, K: int, witnesses: Sequence[Fraction] | None = None
) -> list[list[int]]:
    """The K x K matrix of certified g_k signs at canonical witness points.

    Row j evaluates all g_k at a point certified inside A_(2j+1); the result
    must be the identity pattern, which witnesses linear independence of
    the first K family members.  Witness points may be overridden (any
    permutation of them permutes the rows).
    """
    if K < 1:
        raise ValueError("need at least one index")
    if witnesses is None:
        needed = 2 * (K - 1) + 1
        if partition.stage_count < needed:
            raise NotYetCovered(
                f"fingerprint of size {K} needs {needed} stages",
                needed_stage=needed,
            )
        witnesses = [
            _certified_point(partition, 2 * j + 1) for j in range(K)
        ]
    matrix = []
    for x in witnesses:
        row = []
        for k in range(K):
            sign = eval_g(partition, k, x, depth=4)
            if sign is None:
                raise NotYetCovered(f"witness {x} undecided for index {k}")
            row.append(sign)
        matrix.append(row)
    return matrix


def _certified_point(partition: SplittingPartition, member: int) -> Fraction:
    """A point certainly inside A_member: an interior cover endpoint of the
    first piece hosting it.  Stage n = member hosts member n for n >= 1;
    member 0 is reached through the B piece of stage 1."""
    if partition.stage_count < max(member, 1):
        raise NotYetCovered(
            f"member {member} has no built piece yet", needed_stage=max(member, 1)
        )
    if member == 0:
        cantor_set = partition.piece_set(1, 1)
    else:
        cantor_set = partition.piece_set(member, member - 1)
    return cantor_set.svc_cover(1).parts[0].hi


@dataclass(frozen=True)
class IsometryWitness:
    """A point where the sampled gradient attains the truncated sup norm."""

    point: tuple[Fraction, ...]
    gradient: tuple[Fraction, ...]
    sup_norm: Fraction
    truncated_norm: Fraction


def isometry_witness(sf: SaturatedFunction, K: int) -> IsometryWitness:
    """Exact norm witness: a point with every coordinate in A_(2k*+1).

    k* attains max over k <= K of |mu_k| (the caller ensures the true
    argmax lies within K); at the witness the sampled gradient is the
    constant vector mu_k*, so its sup norm equals the truncated norm.
    """
    if K < 0:
        raise ValueError("truncation must be >= 0")
    m = max((abs(sf.mu.coefficient(k)) for k in range(K + 1)), default=ZERO)
    if m == 0:
        zero = tuple(ZERO for _ in range(sf.d))
        return IsometryWitness(sf.x0, zero, ZERO, ZERO)
    k_star = sf.mu.argmax_index(K)
    coordinate = _certified_point(sf.partition, 2 * k_star + 1)
    point = tuple(coordinate for _ in range(sf.d))
    gradient = tuple(sf.mu.coefficient(k_star) for _ in range(sf.d))
    return IsometryWitness(point, gradient, m, m)
