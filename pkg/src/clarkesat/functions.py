"""Certified evaluation of the Clarke-saturated function family.

The building blocks are the sign functions attached to the partition
members: for index k,

    g_k(t) = +1 on A_(2k+1), -1 on A_(2k), 0 elsewhere,

and their antiderivatives f_k(x) = integral of g_k from x0 to x.  In
dimension d the field value at x is (g_k(x_1), ..., g_k(x_d)) and the
matching potential is the separable sum of the per-coordinate integrals,
which vanishes at x0 and is 1-Lipschitz for the inputs' 1-norm.

A coefficient sequence mu (finite support, or a generator with a declared
exact sup norm) assembles f_mu = sum_k mu_k f_k.  Its Lipschitz norm equals
the sup norm of mu, every evaluation carries a certified rational error
interval, and sampled gradients report the exactly-known value mu_k * sign
wherever the partition certifies the coordinate's member, per-coordinate
independently.

All integrals reduce to certified measures of partition members inside
rational windows, so every bound here is an exact rational inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .cantor import FatCantorSet, MeasureBound
from .errors import NotYetCovered, ToleranceExhausted
from .partition import (
    RETAINED,
    SplittingPartition,
    StageRecord,
    _pieces_overlapping,
    _unit_chunks,
)
from .rationals import Interval, ONE, ZERO, format_rational, parse_rational, rational

_MAX_EVAL_DEPTH = 64


@dataclass(frozen=True)
class ValueBound:
    """Certified interval [lo, hi] containing a true function value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"invalid value bound [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def nests_inside(self, outer: ValueBound) -> bool:
        return outer.lo <= self.lo and self.hi <= outer.hi

    def shift(self, offset: Fraction) -> ValueBound:
        return ValueBound(self.lo + offset, self.hi + offset)

    def __str__(self) -> str:
        return f"{format_rational(self.lo)} {format_rational(self.hi)}"


# ---------------------------------------------------------------------------
# Coefficient sources
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteSupport:
    """Finitely many nonzero rational coefficients, by index."""

    entries: tuple[tuple[int, Fraction], ...]

    @classmethod
    def of(cls, pairs) -> FiniteSupport:
        cleaned = {}
        items = pairs.items() if isinstance(pairs, dict) else pairs
        for k, value in items:
            value = rational(value)
            if k < 0:
                raise ValueError("coefficient indices start at 0")
            if k in cleaned:
                raise ValueError(f"duplicate coefficient index {k}")
            if value != 0:
                cleaned[k] = value
        return cls(tuple(sorted(cleaned.items())))

    @classmethod
    def unit(cls, k: int) -> FiniteSupport:
        return cls.of({k: ONE})

    @classmethod
    def zero(cls) -> FiniteSupport:
        return cls(())

    def coefficient(self, k: int) -> Fraction:
        for index, value in self.entries:
            if index == k:
                return value
        return ZERO

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.entries)

    @property
    def norm_inf(self) -> Fraction:
        return max((abs(v) for _, v in self.entries), default=ZERO)

    @property
    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def argmax_index(self, limit: int | None = None) -> int:
        """Smallest index attaining the largest |coefficient| (0 if empty)."""
        best_k, best = 0, ZERO
        for k, value in self.entries:
            if limit is not None and k > limit:
                continue
            if abs(value) > best:
                best_k, best = k, abs(value)
        return best_k

    def scaled(self, factor: Fraction) -> FiniteSupport:
        return FiniteSupport.of({k: v * factor for k, v in self.entries})


@dataclass(frozen=True, eq=False)
class GeneratorSource:
    """Rule k -> mu_k with a declared exact sup norm (never exceeded)."""

    rule: Callable[[int], Fraction]
    norm_inf: Fraction
    name: str = ""

    def coefficient(self, k: int) -> Fraction:
        value = rational(self.rule(k))
        if abs(value) > self.norm_inf:
            raise ValueError(
                f"generator produced |mu_{k}| = {abs(value)} above its declared norm"
            )
        return value

    def argmax_index(self, limit: int) -> int:
        best_k, best = 0, ZERO
        for k in range(limit + 1):
            value = abs(self.coefficient(k))
            if value > best:
                best_k, best = k, value
        return best_k

    def scaled(self, factor: Fraction) -> GeneratorSource:
        rule = self.rule
        return GeneratorSource(
            lambda k: rational(rule(k)) * factor,
            self.norm_inf * abs(factor),
            name=f"{self.name}*{factor}" if self.name else "",
        )


CoefficientSource = FiniteSupport | GeneratorSource


def ones_generator() -> GeneratorSource:
    return GeneratorSource(lambda k: ONE, ONE, name="ones")


def parse_mu_spec(text: str) -> CoefficientSource:
    """Parse "k:p/q,k:p/q" finite supports or the named generator "ones"."""
    text = text.strip()
    if text == "ones":
        return ones_generator()
    if text in ("zero", ""):
        return FiniteSupport.zero()
    pairs = []
    for item in text.split(","):
        index_text, sep, value_text = item.partition(":")
        if not sep:
            raise ValueError(f"bad coefficient entry {item!r}; expected k:p/q")
        pairs.append((int(index_text), parse_rational(value_text)))
    return FiniteSupport.of(pairs)


def format_mu_spec(mu: CoefficientSource) -> str:
    if isinstance(mu, GeneratorSource):
        return mu.name or "<generator>"
    if not mu.entries:
        return "zero"
    return ",".join(f"{k}:{format_rational(v)}" for k, v in mu.entries)


# ---------------------------------------------------------------------------
# The function family
# ---------------------------------------------------------------------------


def unit_box(d: int) -> tuple[Interval, ...]:
    return tuple(Interval.open(0, 1) for _ in range(d))


def box_center(domain: Sequence[Interval]) -> tuple[Fraction, ...]:
    return tuple(side.midpoint for side in domain)


@dataclass(frozen=True)
class SaturatedFunction:
    """f_mu on an open rational box, evaluable with certified intervals.

    Immutable; evaluations are pure given the immutable partition, so
    parallel sampling is safe.
    """

    partition: SplittingPartition
    mu: CoefficientSource
    d: int = 1
    domain: tuple[Interval, ...] | None = None
    x0: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        domain = self.domain if self.domain is not None else unit_box(self.d)
        if len(domain) != self.d:
            raise ValueError("domain box must have one side per dimension")
        object.__setattr__(self, "domain", tuple(domain))
        x0 = self.x0 if self.x0 is not None else box_center(domain)
        x0 = tuple(rational(c) for c in x0)
        object.__setattr__(self, "x0", x0)
        if not self.contains_point(x0):
            raise ValueError("base point must lie inside the domain box")

    def contains_point(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.d and all(
            side.contains(rational(c)) for side, c in zip(self.domain, x)
        )

    @property
    def norm_inf(self) -> Fraction:
        return self.mu.norm_inf

    def eval(self, x: Sequence[Fraction], tol: Fraction) -> ValueBound:
        return eval_f(self, x, tol)

    def gradient(self, x: Sequence[Fraction], depth: int = 8):
        return sample_gradient(self, x, depth)


def eval_g(
    partition: SplittingPartition, k: int, x: Fraction, depth: int = 8
) -> int | None:
    """The certified sign of g_k at x: +1, -1, 0, or None when undecided."""
    answer = partition.membership(rational(x), depth)
    if not answer.decided:
        return None
    member = answer.member_index
    if member == 2 * k + 1:
        return 1
    if member == 2 * k:
        return -1
    return 0


def eval_f1(
    partition: SplittingPartition,
    k: int,
    x0: Fraction,
    x: Fraction,
    tol: Fraction,
) -> ValueBound:
    """Certified value of f_k(x) relative to base point x0, width <= tol.

    The integral is the oriented measure difference of the two members over
    the window between the points; each measure gets half the tolerance.
    """
    x0, x = rational(x0), rational(x)
    if x == x0:
        return ValueBound(ZERO, ZERO)
    window = Interval.closed(min(x0, x), max(x0, x))
    plus = partition.measure_in(2 * k + 1, window, tol / 2)
    minus = partition.measure_in(2 * k, window, tol / 2)
    lo = plus.lo - minus.hi
    hi = plus.hi - minus.lo
    if x < x0:
        lo, hi = -hi, -lo
    return ValueBound(lo, hi)


# -- the shared certified integrator ----------------------------------------


class _WindowMeasures:
    """Per-member built measures over a fixed window, refined by depth.

    One pass classifies every built piece meeting the window as exact
    (wholly inside or outside) or straddling; refining a depth only
    recomputes the straddlers.  Bounds at depth d+1 nest inside depth d.
    """

    def __init__(self, partition: SplittingPartition, window: Interval):
        self.partition = partition
        self.length = ZERO
        self.exact: dict[int, Fraction] = {}
        self.straddle: list[tuple[FatCantorSet, Interval, int]] = []
        for chunk in _unit_chunks(window, partition.translation):
            self.length += chunk.length
            for record in partition.stages_overlapping(chunk):
                for piece, member, host in _pieces_overlapping(record, chunk):
                    if member == 0:
                        continue  # B pieces are accounted via the complement
                    if chunk.lo <= host.lo and host.hi <= chunk.hi:
                        m = RETAINED * host.length
                        self.exact[member] = self.exact.get(member, ZERO) + m
                    else:
                        self.straddle.append(
                            (partition.piece_set(record.n, piece), chunk, member)
                        )
        self.tail = partition.unbuilt_tail_bound()

    def built_at_depth(self, depth: int) -> dict[int, tuple[Fraction, Fraction]]:
        """Bounds on the built part of lambda(A_j within window), j >= 1.

        The unbuilt stages can add at most ``tail`` of mass, in total across
        all members; callers account for it once.
        """
        bounds: dict[int, tuple[Fraction, Fraction]] = {
            member: (m, m) for member, m in self.exact.items()
        }
        for cantor_set, chunk, member in self.straddle:
            bound = cantor_set.svc_measure_in(chunk, depth)
            lo, hi = bounds.get(member, (ZERO, ZERO))
            bounds[member] = (lo + bound.lo, hi + bound.hi)
        return bounds


def _interval_value(
    partition: SplittingPartition,
    mu: CoefficientSource,
    window: Interval,
    tol: Fraction,
) -> ValueBound:
    """Certified bound on the integral of sum_k mu_k g_k over the window.

    The explicit terms use built measures; one norm * tail correction
    absorbs all unbuilt-stage mass, and generator sources additionally
    widen by the norm-weighted mass not yet attributed to any member.
    """
    measures = _WindowMeasures(partition, window)
    norm = mu.norm_inf
    if norm == 0:
        return ValueBound(ZERO, ZERO)
    if isinstance(mu, FiniteSupport):
        indices = mu.support
        generator = False
    else:
        indices = tuple(range(partition.stage_count // 2 + 1))
        generator = True
    if 2 * norm * measures.tail >= tol:
        raise ToleranceExhausted(
            f"the unbuilt-stage tail alone forces width {2 * norm * measures.tail}"
            f" above tolerance {tol}; rebuild with more stages"
        )
    depth = 0
    while True:
        built = measures.built_at_depth(depth)
        built_lo_sum = sum((lo for lo, _ in built.values()), ZERO)
        built_hi_sum = sum((hi for _, hi in built.values()), ZERO)
        m0_lo = max(ZERO, measures.length - built_hi_sum - measures.tail)
        m0_hi = max(m0_lo, measures.length - built_lo_sum)
        lo = hi = ZERO
        for k in indices:
            coeff = mu.coefficient(k)
            if coeff == 0:
                continue
            plus = built.get(2 * k + 1, (ZERO, ZERO))
            minus = (m0_lo, m0_hi) if k == 0 else built.get(2 * k, (ZERO, ZERO))
            term_lo = plus[0] - minus[1]
            term_hi = plus[1] - minus[0]
            if coeff > 0:
                lo += coeff * term_lo
                hi += coeff * term_hi
            else:
                lo += coeff * term_hi
                hi += coeff * term_lo
        slack = norm * measures.tail
        if generator:
            unresolved = max(ZERO, measures.length - m0_lo - built_lo_sum)
            slack += norm * unresolved
        result = ValueBound(lo - slack, hi + slack)
        if result.width <= tol:
            return result
        depth += 1
        if depth > _MAX_EVAL_DEPTH:
            raise ToleranceExhausted(f"could not reach tolerance {tol} by depth {depth}")


def eval_f(sf: SaturatedFunction, x: Sequence[Fraction], tol: Fraction) -> ValueBound:
    """Certified value of f_mu at x, width <= tol.

    Separable: each coordinate contributes the oriented integral between
    x0_i and x_i, so the per-coordinate budget is tol / d.  Finite supports
    are summed exactly over the support; generator sources additionally
    carry the norm-weighted unresolved-mass term.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    x = tuple(rational(c) for c in x)
    if not sf.contains_point(x):
        raise ValueError(f"point {x} is outside the domain box")
    total_lo = total_hi = ZERO
    active = [i for i in range(sf.d) if x[i] != sf.x0[i]]
    if not active:
        return ValueBound(ZERO, ZERO)
    budget = tol / len(active)
    for i in active:
        a, b = sf.x0[i], x[i]
        window = Interval.closed(min(a, b), max(a, b))
        bound = _interval_value(sf.partition, sf.mu, window, budget)
        if b < a:
            bound = ValueBound(-bound.hi, -bound.lo)
        total_lo += bound.lo
        total_hi += bound.hi
    return ValueBound(total_lo, total_hi)


def sample_gradient(
    sf: SaturatedFunction, x: Sequence[Fraction], depth: int = 8
) -> tuple[Fraction | None, ...]:
    """One generalized gradient sample; None marks undecided coordinates.

    Coordinate i reports mu_k times the certified sign of g_k at x_i for
    the unique member claiming x_i; partition disjointness means at most
    one index can ever contribute per coordinate.
    """
    x = tuple(rational(c) for c in x)
    out: list[Fraction | None] = []
    for c in x:
        answer = sf.partition.membership(c, depth)
        if not answer.decided:
            out.append(None)
            continue
        member = answer.member_index
        if member % 2 == 1:
            out.append(sf.mu.coefficient((member - 1) // 2))
        else:
            out.append(-sf.mu.coefficient(member // 2))
    return tuple(out)


def lipschitz_norm(sf: SaturatedFunction) -> Fraction:
    """Exact Lipschitz norm of f_mu: the sup norm of the coefficients."""
    return sf.mu.norm_inf


def lipschitz_lower_bound(sf: SaturatedFunction, budget: int = 6) -> Fraction:
    """Certified empirical lower bound on the Lipschitz norm.

    Steers a witness pair into a deep cover piece of a set feeding the
    coefficient of largest magnitude: inside a depth-d piece the set holds
    a 2^d/(2^d+1) share of the length, so the certified difference quotient
    approaches the norm.  The returned value never exceeds the true norm.
    budget counts the depths tried.
    """
    norm = sf.mu.norm_inf
    if norm == 0:
        return ZERO
    if isinstance(sf.mu, FiniteSupport):
        k_star = sf.mu.argmax_index()
    else:
        k_star = sf.mu.argmax_index(sf.partition.stage_count // 2)
    member = 2 * k_star + 1
    if sf.partition.stage_count < member:
        raise NotYetCovered(
            f"no stage hosts member {member} yet", needed_stage=member
        )
    witness_set = sf.partition.piece_set(member, member - 1)
    best = ZERO
    for depth in range(4, 4 + max(1, budget)):
        piece = witness_set.svc_cover(depth).parts[0]
        length = piece.length
        bound = _interval_value(
            sf.partition, sf.mu, piece.closure(), norm * length / 512
        )
        certified = max(ZERO, bound.lo, -bound.hi)
        best = max(best, certified / length)
    return best


# ---------------------------------------------------------------------------
# Affine shift: move the gradient ball to an arbitrary center
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftedSaturatedFunction:
    """f_mu rescaled to gradient radius r, plus the exact linear part <p, .>.

    Values are normalized to vanish at the base point, so the linear term
    enters as <p, x - x0>; sampled gradients gain p exactly.
    """

    base: SaturatedFunction
    shift: tuple[Fraction, ...]
    radius: Fraction

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def x0(self) -> tuple[Fraction, ...]:
        return self.base.x0

    def eval(self, x: Sequence[Fraction], tol: Fraction) -> ValueBound:
        x = tuple(rational(c) for c in x)
        linear = sum(
            (p * (c - c0) for p, c, c0 in zip(self.shift, x, self.base.x0)), ZERO
        )
        return self.base.eval(x, tol).shift(linear)

    def gradient(self, x: Sequence[Fraction], depth: int = 8):
        sample = sample_gradient(self.base, x, depth)
        return tuple(
            None if g is None else g + p for g, p in zip(sample, self.shift)
        )

    def gradient_hull(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Per-coordinate interval [p_i - r, p_i + r] of the shifted ball."""
        return tuple((p - self.radius, p + self.radius) for p in self.shift)


def shift_to_ball(
    sf: SaturatedFunction, p: Sequence[Fraction], r: Fraction
) -> ShiftedSaturatedFunction:
    """Represent a function whose gradient ball is centered at p with radius r.

    The coefficients are rescaled so their sup norm is exactly r; r = 0
    degenerates to the plain linear function.
    """
    r = rational(r)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    p = tuple(rational(c) for c in p)
    if len(p) != sf.d:
        raise ValueError("center must have one coordinate per dimension")
    norm = sf.mu.norm_inf
    if r == 0:
        mu = FiniteSupport.zero()
    elif norm == 0:
        raise ValueError("cannot rescale the zero coefficient sequence to a positive radius")
    else:
        mu = sf.mu.scaled(r / norm)
    base = SaturatedFunction(sf.partition, mu, sf.d, sf.domain, sf.x0)
    return ShiftedSaturatedFunction(base, p, r)


# ---------------------------------------------------------------------------
# Sample export
# ---------------------------------------------------------------------------


def export_samples(
    sf: SaturatedFunction,
    points: Sequence[Sequence[Fraction]],
    tol: Fraction,
    depth: int = 8,
) -> str:
    """CSV with per-point certified value bounds and gradient codes.

    Columns: one x_i per coordinate (as p/q), f_lo, f_hi, then one gradient
    code per coordinate (the exact value, or U for undecided).
    """
    header = (
        [f"x{i + 1}" for i in range(sf.d)]
        + ["f_lo", "f_hi"]
        + [f"g{i + 1}" for i in range(sf.d)]
    )
    lines = [",".join(header)]
    for point in points:
        point = tuple(rational(c) for c in point)
        bound = eval_f(sf, point, tol)
        grad = sample_gradient(sf, point, depth)
        row = [format_rational(c) for c in point]
        row += [format_rational(bound.lo), format_rational(bound.hi)]
        row += ["U" if g is None else format_rational(g) for g in grad]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
