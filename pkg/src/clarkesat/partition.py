"""Staged, lazy, deterministic construction of a splitting partition of [0,1).

The partition {A_k} is built stage by stage.  Stage n picks the n-th interval
I_n from a fixed enumeration of rational open subintervals of (0,1), finds an
open gap inside I_n that avoids every previously placed fat Cantor set,
shrinks it, splits it into n+1 contiguous open pieces of equal width, and
plants a fat Cantor set on each piece.  The first n pieces feed A_1 .. A_n,
the last one feeds the reservoir B inside A_0.  Then

    A_k = union over stages n >= k of the k-th set of stage n      (k >= 1)
    A_0 = [0,1) minus the union of all A_k, which contains B.

Every A_k meets every interval in positive measure once enough stages exist,
and the complement within any interval does too, which is exactly the
splitting property the certificates below assert.

Enumeration.  Two deterministic streams are interleaved: odd indices walk a
breadth-first family of overlapping dyadic intervals ((j-1)/2^L, (j+1)/2^L),
even indices walk all rational pairs ordered by denominator sum and then by
numerator.  The dyadic stream guarantees that any window of width w contains
an enumerated interval of index O(1/w); the pair stream makes the
enumeration surjective onto all nontrivial rational open subintervals of
(0,1).  Duplicates between the streams are harmless.  Indices are 1-based
and computable in both directions.

Gap sizing.  The found free interval is shrunk concentrically to length
(2^-j)/3 where 2^-j is the largest power of two not exceeding
min(found length, 2^-n, gap_cap), and the center is snapped down to the
dyadic grid 2^-(j+4).  The margin analysis (found length >= 2^-j, shrink
factor 1/3, snap distance 2^-j/16) keeps the gap strictly inside the free
interval.  The damping keeps gaps well separated so that hosts of distinct
stages stay pairwise disjoint, and the snapping keeps endpoint denominators
at O(n) bits after n stages.  Stage tails are summable:
sum of gap lengths over n > N is at most 2^-N.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .cantor import CANONICAL_SCHEDULE, Containment, FatCantorSet, MeasureBound
from .errors import NotYetCovered, ToleranceExhausted
from .rationals import (
    Interval,
    IntervalSet,
    ONE,
    ZERO,
    format_rational,
    parse_rational,
)

RETAINED = Fraction(1, 2)  # every planted set keeps half of its host piece

# ---------------------------------------------------------------------------
# Enumeration of rational open subintervals of (0,1)
# ---------------------------------------------------------------------------


def _dyadic_stream() -> Iterator[Interval]:
    level = 1
    while True:
        scale = Fraction(1, 2**level)
        for j in range(1, 2**level):
            yield Interval.open((j - 1) * scale, (j + 1) * scale)
        level += 1


def _pair_stream() -> Iterator[Interval]:
    weight = 4
    while True:
        for qa in range(2, weight - 1):
            qb = weight - qa
            for pa in range(1, qa):
                if gcd(pa, qa) != 1:
                    continue
                a = Fraction(pa, qa)
                for pb in range(1, qb):
                    if gcd(pb, qb) != 1:
                        continue
                    b = Fraction(pb, qb)
                    if a < b:
                        yield Interval.open(a, b)
        weight += 1


_enum_cache: list[Interval] = []
_enum_lock = threading.Lock()
_dyadic_iter = _dyadic_stream()
_pair_iter = _pair_stream()


def enumerated_interval(n: int) -> Interval:
    """The n-th interval (1-based) of the interleaved enumeration."""
    if n < 1:
        raise ValueError("enumeration indices start at 1")
    with _enum_lock:
        while len(_enum_cache) < n:
            source = _dyadic_iter if len(_enum_cache) % 2 == 0 else _pair_iter
            _enum_cache.append(next(source))
        return _enum_cache[n - 1]


def enumeration_index(interval: Interval, limit: int = 500_000) -> int:
    """Smallest n with I_n equal to the given open interval."""
    if interval.lo_closed or interval.hi_closed:
        raise ValueError("enumerated intervals are open")
    # Bound the scan: the dyadic stream leaves width w behind once
    # 2^(1-L) < w, the pair stream once the denominator sum is passed.
    width = interval.length
    target_weight = interval.lo.denominator + interval.hi.denominator
    n = 0
    dyadic_done = pair_done = False
    while not (dyadic_done and pair_done):
        n += 1
        if n > limit:
            break
        candidate = enumerated_interval(n)
        if candidate.lo == interval.lo and candidate.hi == interval.hi:
            return n
        if n % 2 == 1:
            if candidate.length < width:
                dyadic_done = True
        else:
            weight = candidate.lo.denominator + candidate.hi.denominator
            if weight > target_weight:
                pair_done = True
    raise ValueError(f"interval {interval} not found in the enumeration")


def first_index_inside(window: Interval, min_index: int = 1, limit: int = 500_000) -> int:
    """Smallest n >= min_index with I_n contained in the window.

    Exists for every nontrivial window thanks to the dyadic stream.
    """
    if not window.is_nontrivial:
        raise ValueError("window must be nontrivial")
    n = max(1, min_index)
    while n <= limit:
        candidate = enumerated_interval(n)
        if window.contains_interval(candidate):
            return n
        n += 1
    raise RuntimeError(f"no enumerated interval inside {window} within {limit} indices")


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StageRecord:
    """Stage n: the certified gap inside I_n and its n+1 planted pieces."""

    n: int
    gap: Interval  # open (a'_n, b'_n)
    depth_used: int

    @property
    def piece_count(self) -> int:
        return self.n + 1

    @property
    def piece_width(self) -> Fraction:
        return self.gap.length / self.piece_count

    def piece_host(self, i: int) -> Interval:
        if not 0 <= i <= self.n:
            raise IndexError(f"stage {self.n} has pieces 0..{self.n}")
        w = self.piece_width
        return Interval.open(self.gap.lo + i * w, self.gap.lo + (i + 1) * w)

    def member_index(self, i: int) -> int:
        """Partition index fed by piece i: pieces 0..n-1 feed A_1..A_n, piece n feeds A_0 (the B set)."""
        return i + 1 if i < self.n else 0

    def piece_for_member(self, k: int) -> int | None:
        """Piece index feeding A_k at this stage, if any."""
        if k == 0:
            return self.n
        if 1 <= k <= self.n:
            return k - 1
        return None


@dataclass(frozen=True)
class PartitionMembership:
    """Certified membership answer: A(k via stage), B(stage), or undecided."""

    kind: str  # "A" | "B" | "undecided"
    k: int | None = None
    stage: int | None = None

    @property
    def decided(self) -> bool:
        return self.kind != "undecided"

    @property
    def member_index(self) -> int | None:
        """Index of the partition member the point is certified to lie in."""
        if self.kind == "A":
            return self.k
        if self.kind == "B":
            return 0
        return None


UNDECIDED_MEMBERSHIP = PartitionMembership("undecided")


@dataclass(frozen=True)
class SplittingCertificate:
    """Witness that 0 < lambda(A_k within window) < lambda(window).

    Both bounds are exact rationals derived from whole planted pieces lying
    inside the window, so the inequalities are machine-checkable.
    """

    k: int
    window: Interval
    stage: int
    piece: int
    lower_bound: Fraction
    complement_member: int
    complement_stage: int
    complement_piece: int
    complement_lower_bound: Fraction

    def render(self) -> str:
        lines = [
            f"splitting certificate for member {self.k} in window {self.window}",
            f"  inner: stage {self.stage} piece {self.piece}"
            f" gives lambda >= {format_rational(self.lower_bound)} > 0/1",
            f"  complement: member {self.complement_member} at stage"
            f" {self.complement_stage} piece {self.complement_piece}"
            f" gives lambda >= {format_rational(self.complement_lower_bound)} > 0/1",
        ]
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# The partition
# ---------------------------------------------------------------------------


_MAX_DIG_DEPTH = 64


class SplittingPartition:
    """An immutable prefix of the staged splitting partition of [0,1).

    Built by ``build_partition``; queries are pure and thread-safe.  Queries
    at points outside [0,1) use the fractional part, i.e. the same pattern
    translated over every [m, m+1).
    """

    def __init__(self, gap_cap: Fraction, stages: tuple[StageRecord, ...], translation: int = 0):
        self.gap_cap = gap_cap
        self.translation = translation
        self.stages = stages
        self._piece_sets: dict[tuple[int, int], FatCantorSet] = {}
        self._cache_lock = threading.Lock()
        order = sorted(range(len(stages)), key=lambda i: stages[i].gap.lo)
        self._order = order
        prefix_max: list[Fraction] = []
        running = Fraction(-1)
        for idx in order:
            running = max(running, stages[idx].gap.hi)
            prefix_max.append(running)
        self._prefix_max_hi = prefix_max

    # -- structure ---------------------------------------------------------

    @property
    def stage_count(self) -> int:
        return len(self.stages)

    def stage(self, n: int) -> StageRecord:
        return self.stages[n - 1]

    def piece_set(self, n: int, i: int) -> FatCantorSet:
        key = (n, i)
        with self._cache_lock:
            cached = self._piece_sets.get(key)
            if cached is None:
                cached = FatCantorSet(self.stage(n).piece_host(i), RETAINED)
                self._piece_sets[key] = cached
        return cached

    def stages_overlapping(self, window: Interval) -> list[StageRecord]:
        """Built stages whose gap closure meets the window, ascending by n."""
        stages = self.stages
        order = self._order
        lo_idx, hi_idx = 0, len(order)
        while lo_idx < hi_idx:
            mid = (lo_idx + hi_idx) // 2
            if stages[order[mid]].gap.lo <= window.hi:
                lo_idx = mid + 1
            else:
                hi_idx = mid
        found = []
        for pos in range(lo_idx - 1, -1, -1):
            if self._prefix_max_hi[pos] < window.lo:
                break
            if stages[order[pos]].gap.hi >= window.lo:
                found.append(stages[order[pos]])
        found.sort(key=lambda s: s.n)
        return found

    def unbuilt_tail_bound(self) -> Fraction:
        """Exact upper bound on the total gap length of all unbuilt stages."""
        return stage_tail_bound(self.stage_count, self.gap_cap)

    # -- membership ---------------------------------------------------------

    def membership(self, x: Fraction, depth: int = 8) -> PartitionMembership:
        """Tri-state membership for the partition member containing x.

        A certified answer never changes under deeper inspection.  A_0 is a
        complement, so it is only certified via a B piece or at x = 0, the
        single point no enumerated interval can ever reach.
        """
        u = _fold(x - self.translation)
        point = Interval.closed(u, u)
        hit = None
        undecided = False
        for record in self.stages_overlapping(point):
            if not (record.gap.lo < u < record.gap.hi):
                continue
            offset = u - record.gap.lo
            width = record.piece_width
            idx, rem = divmod(offset, width)
            if rem == 0:
                continue  # piece boundary: in no open piece of this stage
            answer = self.piece_set(record.n, int(idx)).svc_membership(u, depth)
            if answer is Containment.IN:
                member = record.member_index(int(idx))
                if hit is not None:
                    raise AssertionError("disjointness violated: two stages claim one point")
                hit = PartitionMembership("B" if member == 0 else "A",
                                          0 if member == 0 else member, record.n)
            elif answer is Containment.UNDECIDED:
                undecided = True
        if hit is not None:
            return hit
        if undecided:
            return UNDECIDED_MEMBERSHIP
        if u == 0:
            # Every enumerated interval is an open subset of (0,1), so no
            # stage, built or future, can ever capture the point 0.
            return PartitionMembership("A", 0, None)
        return UNDECIDED_MEMBERSHIP

    # -- measures ------------------------------------------------------------

    def measure_in(self, k: int, window: Interval, tol: Fraction) -> MeasureBound:
        """Certified bound on lambda(A_k within window), width <= tol.

        Windows may extend beyond [0,1); they are folded by integer
        translation.  Raises ToleranceExhausted when the unbuilt-stage tail
        alone exceeds the tolerance (rebuild with more stages).
        """
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        if not window.is_nontrivial:
            return MeasureBound(ZERO, ZERO)
        tail = self.unbuilt_tail_bound()
        if tail >= tol:
            raise ToleranceExhausted(
                f"stage tail {tail} exceeds tolerance {tol}; rebuild with more stages"
            )
        exact_lo = ZERO
        exact_hi = ZERO
        straddlers: list[tuple[FatCantorSet, Interval]] = []
        length = ZERO
        for chunk in _unit_chunks(window, self.translation):
            length += chunk.length
            for record in self.stages_overlapping(chunk):
                for piece, member, host in _pieces_overlapping(record, chunk):
                    if k >= 1 and member != k:
                        continue
                    if k == 0 and member == 0:
                        continue  # complement accounting covers B implicitly
                    if chunk.lo <= host.lo and host.hi <= chunk.hi:
                        m = RETAINED * host.length
                        exact_lo += m
                        exact_hi += m
                    else:
                        straddlers.append((self.piece_set(record.n, piece), chunk))
        depth = 0
        while True:
            lo = exact_lo
            hi = exact_hi
            for cantor_set, chunk in straddlers:
                bound = cantor_set.svc_measure_in(chunk, depth)
                lo += bound.lo
                hi += bound.hi
            if k == 0:
                result = MeasureBound(max(ZERO, length - hi - tail), length - lo)
            else:
                result = MeasureBound(lo, min(length, hi + tail))
            if result.width <= tol:
                return result
            depth += 1
            if depth > _MAX_DIG_DEPTH:
                raise ToleranceExhausted(
                    f"could not reach tolerance {tol} at depth {_MAX_DIG_DEPTH}"
                )

    def splitting_certificate(self, k: int, window: Interval) -> SplittingCertificate:
        """Exact positive witnesses for both A_k and its complement in window.

        Searches built stages for whole planted pieces inside the window.
        Raises NotYetCovered (with the stage count that will surely suffice)
        when the built prefix does not reach into the window yet.
        """
        if not window.is_nontrivial:
            raise ValueError("window must be nontrivial")
        positive = None
        complement = None
        for record in self.stages_overlapping(window):
            piece = record.piece_for_member(k)
            if positive is None and piece is not None:
                host = record.piece_host(piece)
                if window.contains_interval(host):
                    positive = (record.n, piece, RETAINED * host.length)
            if complement is None:
                for piece2, member2, host2 in _pieces_overlapping(record, window):
                    if member2 != k and window.contains_interval(host2):
                        complement = (member2, record.n, piece2, RETAINED * host2.length)
                        break
            if positive and complement:
                return SplittingCertificate(k, window, *positive, *complement)
        needed = first_index_inside(window, max(k, 1))
        raise NotYetCovered(
            f"no stage covers member {k} inside {window} yet; "
            f"build at least {needed} stages",
            needed_stage=needed,
        )


def _fold(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _unit_chunks(window: Interval, translation: int) -> Iterator[Interval]:
    """Split a window at integer boundaries and fold each chunk into [0,1]."""
    lo = window.lo - translation
    hi = window.hi - translation
    m = lo.numerator // lo.denominator
    while m < hi:
        a = max(lo, Fraction(m))
        b = min(hi, Fraction(m + 1))
        if a < b:
            yield Interval.closed(a - m, b - m)
        m += 1


def _pieces_overlapping(record: StageRecord, window: Interval):
    """(piece index, member index, host) for pieces meeting the window."""
    gap = record.gap
    lo = max(window.lo, gap.lo)
    hi = min(window.hi, gap.hi)
    if lo >= hi:
        return
    width = record.piece_width
    first = int((lo - gap.lo) // width)
    last = min(record.n, int((hi - gap.lo) / width))
    for i in range(first, last + 1):
        host = record.piece_host(i)
        if host.overlaps_nontrivially(window):
            yield i, record.member_index(i), host


def stage_tail_bound(built: int, gap_cap: Fraction) -> Fraction:
    """Exact value of sum over n > built of min(gap_cap, 2^-n)/3.

    The minimum switches branches at the smallest n with 2^-n <= gap_cap;
    before it each term is gap_cap, after it the geometric tail sums to
    2^-(switch-1).
    """
    p, q = gap_cap.numerator, gap_cap.denominator
    switch = 0
    while p * 2**switch < q:  # smallest n with 2^-n <= gap_cap
        switch += ((q - 1) // (p * 2**switch)).bit_length() or 1
    while switch > 0 and p * 2 ** (switch - 1) >= q:
        switch -= 1
    start = max(built + 1, switch)
    total = (start - built - 1) * gap_cap + Fraction(1, 2 ** (start - 1))
    return total / 3


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


class _Builder:
    """Mutable construction state: records plus an insertion-sorted gap index."""

    def __init__(self, gap_cap: Fraction, records: tuple[StageRecord, ...]):
        self.gap_cap = gap_cap
        self.records = list(records)
        self.sorted_records = sorted(self.records, key=lambda r: r.gap.lo)
        self.prefix_max_hi: list[Fraction] = []
        running = Fraction(-1)
        for record in self.sorted_records:
            running = max(running, record.gap.hi)
            self.prefix_max_hi.append(running)
        self.piece_sets: dict[tuple[int, int], FatCantorSet] = {}

    def piece_set(self, n: int, i: int) -> FatCantorSet:
        key = (n, i)
        cached = self.piece_sets.get(key)
        if cached is None:
            cached = FatCantorSet(self.records[n - 1].piece_host(i), RETAINED)
            self.piece_sets[key] = cached
        return cached

    def stages_overlapping(self, window: Interval) -> list[StageRecord]:
        ordered = self.sorted_records
        lo_idx, hi_idx = 0, len(ordered)
        while lo_idx < hi_idx:
            mid = (lo_idx + hi_idx) // 2
            if ordered[mid].gap.lo <= window.hi:
                lo_idx = mid + 1
            else:
                hi_idx = mid
        found = []
        for pos in range(lo_idx - 1, -1, -1):
            if self.prefix_max_hi[pos] < window.lo:
                break
            if ordered[pos].gap.hi >= window.lo:
                found.append(ordered[pos])
        found.sort(key=lambda r: r.n)
        return found

    def add_stage(self) -> None:
        n = len(self.records) + 1
        target = enumerated_interval(n)
        overlapping = self.stages_overlapping(target)
        found, depth_used = self._free_subinterval(overlapping, target)
        record = StageRecord(n, _shrink_gap(found, n, self.gap_cap), depth_used)
        self.records.append(record)
        pos = 0
        hi_pos = len(self.sorted_records)
        while pos < hi_pos:
            mid = (pos + hi_pos) // 2
            if self.sorted_records[mid].gap.lo < record.gap.lo:
                pos = mid + 1
            else:
                hi_pos = mid
        self.sorted_records.insert(pos, record)
        running = self.prefix_max_hi[pos - 1] if pos else Fraction(-1)
        self.prefix_max_hi.insert(pos, max(running, record.gap.hi))
        for idx in range(pos + 1, len(self.prefix_max_hi)):
            if self.prefix_max_hi[idx] >= self.prefix_max_hi[idx - 1]:
                break
            self.prefix_max_hi[idx] = self.prefix_max_hi[idx - 1]

    def _free_subinterval(
        self, overlapping: list[StageRecord], target: Interval
    ) -> tuple[Interval, int]:
        """Longest open subinterval of target avoiding all planted sets.

        First tries the closures of the existing gaps as obstructions
        (depth 0): every planted set lives inside some gap, so a gap-free
        zone is certainly set-free.  Only when the gaps tile the whole
        target does it dig into their covers at doubling depth; the dug gap
        is then certified disjoint from every planted set, although it nests
        inside an earlier gap's removed middle.
        """
        obstruction_parts = []
        for record in overlapping:
            piece = record.gap.closure().intersect(target)
            if piece is not None:
                obstruction_parts.append(piece)
        free = IntervalSet.of(obstruction_parts).complement_within(target)
        best = _longest_part(free)
        if best is not None:
            return best.interior(), 0
        # The gaps tile the target.  Dig into the one with the largest
        # overlap, replacing its closure by its piece covers at increasing
        # depth; all other gaps stay opaque (their sets live inside them, so
        # avoiding the closures is enough).
        ranked = sorted(
            overlapping,
            key=lambda r: (min(r.gap.hi, target.hi) - max(r.gap.lo, target.lo), -r.n),
            reverse=True,
        )
        for chosen in ranked:
            other_parts = []
            for record in overlapping:
                if record.n == chosen.n:
                    continue
                piece = record.gap.closure().intersect(target)
                if piece is not None:
                    other_parts.append(piece)
            depth = 1
            while depth <= 16:
                cover_parts = list(other_parts)
                for i, _member, _host in _pieces_overlapping(chosen, target):
                    cover = self.piece_set(chosen.n, i).svc_cover(depth)
                    piece = cover.intersect_interval(target)
                    if not piece.is_empty:
                        cover_parts.extend(piece.parts)
                free = IntervalSet.of(cover_parts).complement_within(target)
                best = _longest_part(free)
                if best is not None:
                    return best.interior(), depth
                depth *= 2
        # Full dig across all overlapping stages (not expected in practice).
        depth = 1
        while depth <= _MAX_DIG_DEPTH:
            cover_parts = []
            for record in overlapping:
                for i, _member, _host in _pieces_overlapping(record, target):
                    cover = self.piece_set(record.n, i).svc_cover(depth)
                    piece = cover.intersect_interval(target)
                    if not piece.is_empty:
                        cover_parts.extend(piece.parts)
            free = IntervalSet.of(cover_parts).complement_within(target)
            best = _longest_part(free)
            if best is not None:
                return best.interior(), depth
            depth *= 2
        raise RuntimeError(f"no gap found inside {target}")


def build_partition(stages: int, gap_cap: Fraction = ONE) -> SplittingPartition:
    """Build the deterministic partition prefix with the given stage count.

    Bit-for-bit reproducible from (stages, gap_cap): the enumeration, the
    gap search, the shrink rule, and the piece layout are all deterministic.
    """
    if stages < 1:
        raise ValueError("at least one stage is required")
    if not (0 < gap_cap <= 1):
        raise ValueError("gap_cap must lie in (0, 1]")
    return extend_partition(SplittingPartition(gap_cap, ()), stages)


def extend_partition(partition: SplittingPartition, stages: int) -> SplittingPartition:
    """Deterministic continuation; extend(build(N), M) equals build(M)."""
    if stages <= partition.stage_count:
        return partition
    builder = _Builder(partition.gap_cap, partition.stages)
    while len(builder.records) < stages:
        builder.add_stage()
    return SplittingPartition(partition.gap_cap, tuple(builder.records), partition.translation)


def _longest_part(parts: IntervalSet) -> Interval | None:
    best = None
    for part in parts:
        if part.is_nontrivial and (best is None or part.length > best.length):
            best = part
    return best


def _shrink_gap(found: Interval, n: int, gap_cap: Fraction) -> Interval:
    bound = min(found.length, Fraction(1, 2**n), gap_cap)
    j = 0
    while Fraction(1, 2**j) > bound:
        j += 1
    length = Fraction(1, 3 * 2**j)
    grid = 2 ** (j + 4)
    mid = found.midpoint
    center = Fraction((mid.numerator * grid) // mid.denominator, grid)
    gap = Interval.open(center - length / 2, center + length / 2)
    if not (found.lo < gap.lo and gap.hi < found.hi):
        raise AssertionError(f"gap {gap} escaped its free interval {found}")
    return gap


# ---------------------------------------------------------------------------
# Serialization: SPLITPART v1
# ---------------------------------------------------------------------------


def saves(partition: SplittingPartition) -> str:
    lines = ["SPLITPART v1"]
    lines.append(
        f"gap_cap={format_rational(partition.gap_cap)}"
        f" translation={partition.translation}"
        f" stages={partition.stage_count}"
    )
    for record in partition.stages:
        tokens = [
            f"n={record.n}",
            f"gap={format_rational(record.gap.lo)},{format_rational(record.gap.hi)}",
            f"depth={record.depth_used}",
        ]
        for i in range(record.piece_count):
            host = record.piece_host(i)
            kind = f"T {record.member_index(i)}" if i < record.n else "B"
            tokens.append(
                f"{kind} {format_rational(host.lo)},{format_rational(host.hi)}"
                f" {CANONICAL_SCHEDULE}"
            )
        lines.append(" ".join(tokens))
    return "\n".join(lines) + "\n"


def loads(text: str) -> SplittingPartition:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != "SPLITPART v1":
        raise ValueError("not a SPLITPART v1 file")
    header = dict(item.split("=", 1) for item in lines[1].split())
    gap_cap = parse_rational(header["gap_cap"])
    translation = int(header["translation"])
    declared = int(header["stages"])
    records = []
    for line in lines[2:]:
        records.append(_parse_stage_line(line))
    if len(records) != declared:
        raise ValueError(f"expected {declared} stages, found {len(records)}")
    return SplittingPartition(gap_cap, tuple(records), translation)


def _parse_stage_line(line: str) -> StageRecord:
    tokens = line.split()
    fields = dict(item.split("=", 1) for item in tokens[:3])
    n = int(fields["n"])
    gap_lo, gap_hi = (parse_rational(part) for part in fields["gap"].split(","))
    record = StageRecord(n, Interval.open(gap_lo, gap_hi), int(fields["depth"]))
    rest = tokens[3:]
    pos = 0
    for i in range(record.piece_count):
        kind = rest[pos]
        if kind == "T":
            member, hosts, schedule = int(rest[pos + 1]), rest[pos + 2], rest[pos + 3]
            pos += 4
        elif kind == "B":
            member, hosts, schedule = 0, rest[pos + 1], rest[pos + 2]
            pos += 3
        else:
            raise ValueError(f"unexpected set record kind {kind!r}")
        host_lo, host_hi = (parse_rational(part) for part in hosts.split(","))
        expected = record.piece_host(i)
        if (
            member != record.member_index(i)
            or host_lo != expected.lo
            or host_hi != expected.hi
            or schedule != CANONICAL_SCHEDULE
        ):
            raise ValueError(f"inconsistent set record at stage {n}, piece {i}")
    if pos != len(rest):
        raise ValueError(f"trailing tokens in stage {n} line")
    return record


def save(partition: SplittingPartition, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(saves(partition))


def load(path) -> SplittingPartition:
    with open(path, "r", encoding="ascii") as fh:
        return loads(fh.read())


# ---------------------------------------------------------------------------
# Structural checks (used by tests and the acceptance suite)
# ---------------------------------------------------------------------------


def hosts_pairwise_disjoint(partition: SplittingPartition) -> bool:
    """Exact check that all planted host intervals are pairwise disjoint.

    Hosts within a stage are contiguous open pieces, disjoint by
    construction; across stages disjointness holds whenever each gap avoids
    the closures of all earlier gaps, which the gap placement ensures except
    in the degenerate tiled case.
    """
    hosts = []
    for record in partition.stages:
        hosts.append((record.gap.lo, record.gap.hi))
    hosts.sort()
    for (lo_a, hi_a), (lo_b, hi_b) in zip(hosts, hosts[1:]):
        if lo_b < hi_a:
            return False
    return True


def membership(p: SplittingPartition, x: Fraction, depth: int = 8) -> PartitionMembership:
    return p.membership(x, depth)


def measure_in(p: SplittingPartition, k: int, window: Interval, tol: Fraction) -> MeasureBound:
    return p.measure_in(k, window, tol)


def splitting_certificate(p: SplittingPartition, k: int, window: Interval) -> SplittingCertificate:
    return p.splitting_certificate(k, window)


def splitting_certificate_auto(
    p: SplittingPartition, k: int, window: Interval
) -> tuple[SplittingCertificate, SplittingPartition]:
    """Certificate with automatic stage extension; returns the grown partition."""
    while True:
        try:
            return p.splitting_certificate(k, window), p
        except NotYetCovered as exc:
            if exc.needed_stage is None or exc.needed_stage <= p.stage_count:
                raise
            p = extend_partition(p, exc.needed_stage)
