"""Fat Cantor sets over rational intervals, with certified finite-depth covers.

A fat Cantor set here is the classic middle-interval construction with a
summable removal schedule.  Over a host of length L with retained fraction
rho, step n removes an open middle interval of length

    removal(n) = (1 - rho) * L / 2 * 4^(-n)

from each of the 2^n closed pieces of the current cover.  The removed total
is sum_n 2^n * removal(n) = (1 - rho) * L exactly, so the limit set F has
measure rho * L.  The depth-d cover F_d consists of 2^d closed pieces and

    measure(F_d) = rho * L + tail(d),    tail(d) = (1 - rho) * L * 2^(-d).

Every piece endpoint at every depth survives to F.  When the host interval
is open on a side, that host endpoint is excluded from F as a point; this
keeps fat Cantor sets over contiguous open pieces pairwise disjoint and does
not change any measure.

Feasibility of the schedule is automatic: removal(n) is strictly less than
the current piece length rho*L*2^(-n) + (1-rho)*L*4^(-n) for every
rho in (0,1).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd

from .rationals import Interval, IntervalSet, ZERO, format_rational, parse_rational, rational

CANONICAL_SCHEDULE = "canonical-svc"

# Covers are memoized only up to this depth; deeper covers are recomputed
# from the deepest cached level on each call.
_MEMO_DEPTH = 10


class Containment(Enum):
    """Tri-state membership answer, sound at every finite depth."""

    IN = "in"
    OUT = "out"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class MeasureBound:
    """Certified interval [lo, hi] containing a true Lebesgue measure."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (ZERO <= self.lo <= self.hi):
            raise ValueError(f"invalid measure bound [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def nests_inside(self, outer: MeasureBound) -> bool:
        return outer.lo <= self.lo and self.hi <= outer.hi

    def __str__(self) -> str:
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


@dataclass(frozen=True)
class FatCantorSet:
    """A Cantor-type set of positive measure over a rational host interval.

    Immutable; cover queries are pure functions of (set, depth) behind an
    internally synchronized memo cache.
    """

    host: Interval
    retained_fraction: Fraction = Fraction(1, 2)
    schedule: str = CANONICAL_SCHEDULE
    _cover_cache: dict = field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        if not self.host.is_nontrivial:
            raise ValueError("host interval must be nontrivial")
        if not (0 < self.retained_fraction < 1):
            raise ValueError("retained fraction must lie strictly between 0 and 1")
        if self.schedule != CANONICAL_SCHEDULE:
            raise ValueError(f"unknown removal schedule {self.schedule!r}")

    @classmethod
    def canonical(cls) -> FatCantorSet:
        """The classic construction over [0,1] with limit measure 1/2."""
        return cls(Interval.closed(0, 1))

    @property
    def length(self) -> Fraction:
        return self.host.length

    @property
    def limit_measure(self) -> Fraction:
        return self.retained_fraction * self.length

    def removal_length(self, step: int) -> Fraction:
        """Length removed from each of the 2^step pieces at that step."""
        return (1 - self.retained_fraction) * self.length / (2 * 4**step)

    def tail(self, depth: int) -> Fraction:
        """Exact cover excess: measure(F_depth) - limit_measure."""
        return (1 - self.retained_fraction) * self.length / 2**depth

    def _parts(self, depth: int) -> tuple[tuple[Fraction, Fraction], ...]:
        if depth < 0:
            raise ValueError("depth must be >= 0")
        with self._lock:
            cached = self._cover_cache.get(depth)
        if cached is not None:
            return cached
        parts = self._compute_parts(depth)
        if depth <= _MEMO_DEPTH:
            with self._lock:
                self._cover_cache[depth] = parts
        return parts

    def _compute_parts(self, depth: int) -> tuple[tuple[Fraction, Fraction], ...]:
        # All endpoints at step s share the denominator 4^(s+1) * B, so the
        # splitting runs on integer numerators: scaling by 4 per step makes
        # the removed half-length a constant numerator 4 * (1-rho) * L * B.
        removed = (1 - self.retained_fraction) * self.length
        base = self.host.lo.denominator
        for value in (self.host.hi, removed):
            base = base * value.denominator // gcd(base, value.denominator)
        den = 4 * base
        half_num = 4 * removed.numerator * (base // removed.denominator)
        parts = [
            (self.host.lo.numerator * (den // self.host.lo.denominator),
             self.host.hi.numerator * (den // self.host.hi.denominator)),
        ]
        for _ in range(depth):
            den *= 4
            out = []
            for lo, hi in parts:
                mid = 2 * (lo + hi)
                out.append((4 * lo, mid - half_num))
                out.append((mid + half_num, 4 * hi))
            parts = out
        return tuple((Fraction(lo, den), Fraction(hi, den)) for lo, hi in parts)

    def svc_cover(self, depth: int) -> IntervalSet:
        """The depth-d cover: 2^d closed intervals whose intersection is F."""
        return IntervalSet(
            tuple(Interval(lo, hi, True, True) for lo, hi in self._parts(depth))
        )

    def svc_membership(self, x: Fraction, depth: int) -> Containment:
        """Certified membership in F at finite depth.

        OUT when x falls outside the depth-d cover (then x is not in F,
        definitely).  IN when x is a piece endpoint (endpoints are never
        removed), except that an open host endpoint is excluded.  Everything
        else is UNDECIDED.
        """
        x = rational(x)
        if x == self.host.lo and not self.host.lo_closed:
            return Containment.OUT
        if x == self.host.hi and not self.host.hi_closed:
            return Containment.OUT
        parts = self._parts(depth)
        lo_idx, hi_idx = 0, len(parts)
        while lo_idx < hi_idx:
            mid = (lo_idx + hi_idx) // 2
            if parts[mid][1] < x:
                lo_idx = mid + 1
            else:
                hi_idx = mid
        if lo_idx == len(parts) or x < parts[lo_idx][0]:
            return Containment.OUT
        lo, hi = parts[lo_idx]
        if x == lo or x == hi:
            return Containment.IN
        return Containment.UNDECIDED

    def svc_measure_in(self, window: Interval, depth: int) -> MeasureBound:
        """Certified bound on lambda(F intersect window).

        Exact (width zero) when the window misses the host or swallows it
        whole.  Otherwise the cover is descended recursively, restricted to
        the window: cover pieces wholly inside resolve exactly (each
        depth-s piece carries F-mass limit_measure / 2^s), pieces wholly
        outside contribute nothing, and only boundary pieces pay the
        depth-d tail.  The upper bound equals the cover measure inside the
        window; bounds nest as the depth grows.
        """
        if not window.overlaps_nontrivially(self.host):
            return MeasureBound(ZERO, ZERO)
        if window.lo <= self.host.lo and self.host.hi <= window.hi:
            return MeasureBound(self.limit_measure, self.limit_measure)
        lo, hi = self._mass_bounds(window, self.host.lo, self.host.hi, 0, depth)
        return MeasureBound(lo, hi)

    def _mass_bounds(self, window, lo, hi, step, depth_left):
        a = max(lo, window.lo)
        b = min(hi, window.hi)
        if b <= a:
            return ZERO, ZERO
        if window.lo <= lo and hi <= window.hi:
            mass = self.limit_measure / 2**step
            return mass, mass
        if depth_left == 0:
            overlap = b - a
            mass = self.limit_measure / 2**step
            slack = (hi - lo) - mass
            return max(ZERO, overlap - slack), min(overlap, mass)
        half = self.removal_length(step) / 2
        mid = (lo + hi) / 2
        left = self._mass_bounds(window, lo, mid - half, step + 1, depth_left - 1)
        right = self._mass_bounds(window, mid + half, hi, step + 1, depth_left - 1)
        return left[0] + right[0], left[1] + right[1]

    def serialize(self) -> str:
        return " ".join(
            (
                format_rational(self.host.lo),
                format_rational(self.host.hi),
                "closed" if self.host.lo_closed else "open",
                "closed" if self.host.hi_closed else "open",
                format_rational(self.retained_fraction),
                self.schedule,
            )
        )

    @classmethod
    def deserialize(cls, text: str) -> FatCantorSet:
        lo, hi, lo_flag, hi_flag, retained, schedule = text.split()
        return cls(
            Interval(
                parse_rational(lo),
                parse_rational(hi),
                lo_flag == "closed",
                hi_flag == "closed",
            ),
            parse_rational(retained),
            schedule,
        )


def svc_cover(c: FatCantorSet, depth: int) -> IntervalSet:
    return c.svc_cover(depth)


def svc_membership(c: FatCantorSet, x: Fraction, depth: int) -> Containment:
    return c.svc_membership(x, depth)


def svc_measure_in(c: FatCantorSet, window: Interval, depth: int) -> MeasureBound:
    return c.svc_measure_in(window, depth)


_MAX_GAP_DEPTH = 64


def find_gap(prior: list[FatCantorSet], target: Interval) -> tuple[Interval, int]:
    """Find a nontrivial open subinterval of target avoiding every prior set.

    Certified against the depth-d covers, so disjointness from the true sets
    follows.  Returns the longest such gap (leftmost on ties) together with
    the smallest tried depth that exposed one.  Depths double from 1;
    termination is guaranteed because the covers shrink to nowhere dense
    sets while the target has positive length.
    """
    if not target.is_nontrivial:
        raise ValueError("target must be nontrivial")
    relevant = [c for c in prior if target.overlaps_nontrivially(c.host)]
    if not relevant:
        return target.interior(), 0
    depth = 1
    while depth <= _MAX_GAP_DEPTH:
        obstruction = IntervalSet.empty()
        for c in relevant:
            obstruction = obstruction.union(
                c.svc_cover(depth).intersect_interval(target)
            )
        free = obstruction.complement_within(target)
        best = None
        for part in free.parts:
            if part.is_nontrivial and (best is None or part.length > best.length):
                best = part
        if best is not None:
            return best.interior(), depth
        depth *= 2
    raise RuntimeError("no gap found; removal schedules were not summable")
