from fractions import Fraction

import pytest

from clarkesat.cantor import (
    Containment,
    FatCantorSet,
    MeasureBound,
    find_gap,
    svc_cover,
    svc_measure_in,
    svc_membership,
)
from clarkesat.rationals import Interval, IntervalSet, measure


@pytest.fixture(scope="module")
def canonical():
    return FatCantorSet.canonical()


def closed_set(*pairs):
    return IntervalSet.of(Interval.closed(a, b) for a, b in pairs)


def test_depth_zero_cover_is_host(canonical):
    assert svc_cover(canonical, 0) == closed_set((0, 1))


def test_depth_one_cover(canonical):
    cover = svc_cover(canonical, 1)
    assert cover == closed_set((Fraction(0), Fraction(3, 8)), (Fraction(5, 8), Fraction(1)))
    assert measure(cover) == Fraction(3, 4)


def test_depth_two_cover_measure(canonical):
    assert measure(svc_cover(canonical, 2)) == Fraction(5, 8)


def test_cover_measure_law(canonical):
    # Partial sums of the removal schedule give 1/2 + 2^-(n+1) exactly.
    for n in range(11):
        expected = Fraction(1, 2) + Fraction(1, 2 ** (n + 1))
        assert measure(svc_cover(canonical, n)) == expected
        assert canonical.limit_measure + canonical.tail(n) == expected


def test_covers_are_nested(canonical):
    for d in range(6):
        outer = svc_cover(canonical, d)
        inner = svc_cover(canonical, d + 1)
        for part in inner.parts:
            assert any(p.contains_interval(part) for p in outer.parts)


def test_every_part_splits_at_next_depth(canonical):
    # Nowhere density proxy: each piece acquires an interior gap immediately.
    for d in range(5):
        outer = svc_cover(canonical, d).parts
        inner = svc_cover(canonical, d + 1).parts
        for part in outer:
            children = [q for q in inner if part.contains_interval(q)]
            assert len(children) == 2


def test_membership_first_gap(canonical):
    assert svc_membership(canonical, Fraction(1, 2), 1) is Containment.OUT
    assert svc_membership(canonical, Fraction(1, 2), 3) is Containment.OUT


def test_membership_host_endpoint(canonical):
    for depth in (0, 1, 5):
        assert svc_membership(canonical, Fraction(0), depth) is Containment.IN


def test_membership_undecided_interior(canonical):
    assert svc_membership(canonical, Fraction(1, 3), 1) is Containment.UNDECIDED


def test_membership_never_retracts(canonical):
    xs = [Fraction(k, 64) for k in range(65)]
    prev = {x: svc_membership(canonical, x, 0) for x in xs}
    for depth in range(1, 8):
        for x in xs:
            answer = svc_membership(canonical, x, depth)
            if prev[x] is not Containment.UNDECIDED:
                assert answer is prev[x]
            prev[x] = answer


def test_open_host_excludes_endpoints():
    c = FatCantorSet(Interval.open(0, 1))
    assert c.svc_membership(Fraction(0), 3) is Containment.OUT
    assert c.svc_membership(Fraction(1), 3) is Containment.OUT
    # Interior piece endpoints still belong to the set.
    inner_endpoint = c.svc_cover(1).parts[0].hi
    assert c.svc_membership(inner_endpoint, 1) is Containment.IN


def test_measure_in_whole_window_converges(canonical):
    window = Interval.closed(0, 1)
    half = Fraction(1, 2)
    for depth in range(10):
        bound = svc_measure_in(canonical, window, depth)
        assert bound.contains(half)
    assert svc_measure_in(canonical, window, 0).width == 0  # window covers host


def test_measure_in_left_half_converges_to_quarter(canonical):
    window = Interval.closed(0, Fraction(3, 8))
    quarter = Fraction(1, 4)
    prev = None
    for depth in range(1, 12):
        bound = svc_measure_in(canonical, window, depth)
        assert bound.contains(quarter)
        if prev is not None:
            assert bound.nests_inside(prev)
        prev = bound
    assert prev.width <= Fraction(1, 2**10)


def test_measure_in_disjoint_window(canonical):
    bound = svc_measure_in(canonical, Interval.closed(2, 3), 4)
    assert bound == MeasureBound(Fraction(0), Fraction(0))


def test_affine_transport():
    # A set over (a,b) is the affine image of the canonical one over [0,1].
    a, b = Fraction(1, 3), Fraction(3, 4)
    scaled = FatCantorSet(Interval.open(a, b))
    canonical = FatCantorSet.canonical()
    for depth in range(5):
        image = [
            (a + (b - a) * lo, a + (b - a) * hi)
            for lo, hi in ((p.lo, p.hi) for p in canonical.svc_cover(depth).parts)
        ]
        ours = [(p.lo, p.hi) for p in scaled.svc_cover(depth).parts]
        assert image == ours


def test_retained_fraction_law():
    c = FatCantorSet(Interval.closed(0, 1), Fraction(2, 3))
    for n in range(8):
        expected = Fraction(2, 3) + Fraction(1, 3) / 2**n
        assert measure(c.svc_cover(n)) == expected


def test_serialization_round_trip():
    c = FatCantorSet(Interval.open(Fraction(1, 3), Fraction(3, 4)), Fraction(1, 2))
    assert FatCantorSet.deserialize(c.serialize()) == c


def test_find_gap_no_priors():
    gap, depth = find_gap([], Interval.open(0, 1))
    assert gap == Interval.open(0, 1)
    assert depth == 0


def test_find_gap_first_removed_interval(canonical):
    gap, depth = find_gap([canonical], Interval.open(0, 1))
    assert gap == Interval.open(Fraction(3, 8), Fraction(5, 8))
    assert depth == 1


def test_find_gap_left_branch(canonical):
    gap, depth = find_gap([canonical], Interval.open(0, Fraction(3, 8)))
    assert gap == Interval.open(Fraction(5, 32), Fraction(7, 32))
    assert depth == 2


def test_find_gap_avoids_every_prior(canonical):
    other = FatCantorSet(Interval.open(Fraction(3, 8), Fraction(5, 8)))
    gap, depth = find_gap([canonical, other], Interval.open(0, 1))
    for c in (canonical, other):
        assert c.svc_cover(depth).intersect_interval(gap).is_empty
