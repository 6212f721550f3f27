import random
from fractions import Fraction

import pytest

from clarkesat.errors import ToleranceExhausted
from clarkesat.functions import (
    FiniteSupport,
    GeneratorSource,
    SaturatedFunction,
    ValueBound,
    eval_f,
    eval_f1,
    eval_g,
    export_samples,
    lipschitz_lower_bound,
    lipschitz_norm,
    ones_generator,
    parse_mu_spec,
    sample_gradient,
    shift_to_ball,
)
from clarkesat.partition import build_partition
from clarkesat.rationals import Interval
from clarkesat.verifier import _certified_point

TOL = Fraction(1, 10**6)


@pytest.fixture(scope="module")
def p30():
    return build_partition(30)


@pytest.fixture(scope="module")
def e0(p30):
    return SaturatedFunction(p30, FiniteSupport.unit(0))


@pytest.fixture(scope="module")
def mixed(p30):
    return SaturatedFunction(p30, FiniteSupport.of({0: 3, 1: -5, 2: 2}))


def test_finite_support_normalizes():
    mu = FiniteSupport.of({3: Fraction(2), 1: Fraction(0), 0: Fraction(-1, 2)})
    assert mu.support == (0, 3)
    assert mu.norm_inf == 2
    assert mu.coefficient(1) == 0
    assert mu.argmax_index() == 3
    with pytest.raises(ValueError):
        FiniteSupport.of([(1, Fraction(1)), (1, Fraction(2))])


def test_generator_source_checks_declared_norm():
    bad = GeneratorSource(lambda k: Fraction(k), Fraction(1))
    with pytest.raises(ValueError):
        bad.coefficient(2)
    ones = ones_generator()
    assert ones.coefficient(17) == 1
    assert ones.argmax_index(5) == 0


def test_parse_mu_spec_round_trip():
    mu = parse_mu_spec("0:3/1,1:-5/1,2:2/1")
    assert mu == FiniteSupport.of({0: 3, 1: -5, 2: 2})
    assert isinstance(parse_mu_spec("ones"), GeneratorSource)
    assert parse_mu_spec("zero") == FiniteSupport.zero()
    with pytest.raises(ValueError):
        parse_mu_spec("0=1/2")


def test_eval_g_witness_values(p30):
    plus = _certified_point(p30, 1)  # a point of A_1
    minus = _certified_point(p30, 2)  # a point of A_2
    other = _certified_point(p30, 3)  # a point of A_3
    assert eval_g(p30, 0, plus, 4) == 1
    assert eval_g(p30, 1, minus, 4) == -1
    assert eval_g(p30, 0, minus, 4) == 0  # certified in a foreign member
    assert eval_g(p30, 1, other, 4) == 1
    assert eval_g(p30, 0, Fraction(0), 4) == -1  # 0 is certified in A_0


def test_eval_g_undecided(p30):
    host = p30.stage(1).piece_host(0)
    interior = (host.lo * 2 + host.hi) / 3  # inside the cover, not an endpoint
    assert eval_g(p30, 0, interior, 1) is None


def test_eval_f1_at_base_point(p30):
    assert eval_f1(p30, 0, Fraction(1, 2), Fraction(1, 2), TOL) == ValueBound(0, 0)


def test_eval_f1_orientation_antisymmetry(p30):
    a, b = Fraction(1, 3), Fraction(4, 5)
    fwd = eval_f1(p30, 1, a, b, TOL)
    rev = eval_f1(p30, 1, b, a, TOL)
    assert (fwd.lo, fwd.hi) == (-rev.hi, -rev.lo)
    assert fwd.width <= TOL


def test_eval_f1_is_1_lipschitz_between_samples(p30):
    rng = random.Random(7)
    x0 = Fraction(1, 2)
    points = [Fraction(rng.randrange(1, 256), 256) for _ in range(12)]
    values = {x: eval_f1(p30, 0, x0, x, TOL) for x in points}
    for x in points:
        for y in points:
            gap = abs(values[x].mid - values[y].mid)
            assert gap <= abs(x - y) + values[x].width + values[y].width


def test_eval_f_zero_mu_everywhere(p30):
    zero = SaturatedFunction(p30, FiniteSupport.zero(), d=2)
    assert eval_f(zero, (Fraction(1, 3), Fraction(2, 3)), TOL) == ValueBound(0, 0)


def test_eval_f_matches_eval_f1_sum(p30, e0):
    sf2 = SaturatedFunction(p30, FiniteSupport.unit(1), d=2)
    x = (Fraction(2, 7), Fraction(5, 8))
    combined = eval_f(sf2, x, TOL)
    split = [eval_f1(p30, 1, sf2.x0[i], x[i], TOL / 2) for i in range(2)]
    lo = split[0].lo + split[1].lo
    hi = split[0].hi + split[1].hi
    assert max(lo, combined.lo) <= min(hi, combined.hi)  # overlapping certificates


def test_eval_f_rejects_outside_domain(e0):
    with pytest.raises(ValueError):
        eval_f(e0, (Fraction(3, 2),), TOL)


def test_eval_f_additivity_of_sources(p30):
    x = (Fraction(3, 11),)
    a = SaturatedFunction(p30, FiniteSupport.of({0: 2}))
    b = SaturatedFunction(p30, FiniteSupport.of({1: -3}))
    both = SaturatedFunction(p30, FiniteSupport.of({0: 2, 1: -3}))
    va, vb = eval_f(a, x, TOL), eval_f(b, x, TOL)
    vboth = eval_f(both, x, TOL)
    assert va.lo + vb.lo <= vboth.hi and vboth.lo <= va.hi + vb.hi


def test_eval_f_generator_bounds_nest(p30):
    ones = SaturatedFunction(p30, ones_generator())
    x = (Fraction(7, 9),)
    previous = None
    for tol in (Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000)):
        bound = eval_f(ones, x, tol)
        assert bound.width <= tol
        if previous is not None:
            assert bound.nests_inside(previous)
        previous = bound


def test_eval_f_tolerance_exhausted_on_shallow_partition():
    shallow = build_partition(3)
    ones = SaturatedFunction(shallow, ones_generator())
    with pytest.raises(ToleranceExhausted):
        eval_f(ones, (Fraction(1, 3),), Fraction(1, 10**9))


def test_rectangle_identity_sampled(p30, e0):
    sf = SaturatedFunction(p30, FiniteSupport.unit(0), d=2)
    rng = random.Random(11)
    for _ in range(25):
        x1, y1, x2, y2 = (Fraction(rng.randrange(1, 512), 512) for _ in range(4))
        total = (
            eval_f(sf, (x1, x2), TOL).mid
            + eval_f(sf, (y1, y2), TOL).mid
            - eval_f(sf, (x1, y2), TOL).mid
            - eval_f(sf, (y1, x2), TOL).mid
        )
        assert abs(total) <= 4 * TOL


def test_sample_gradient_constant_pattern(p30, mixed):
    w = _certified_point(p30, 3)  # A_3 = plus-set of index 1
    sf = SaturatedFunction(p30, mixed.mu, d=3)
    assert sample_gradient(sf, (w, w, w), 2) == (-5, -5, -5)


def test_sample_gradient_mixed_pattern(p30, mixed):
    plus = _certified_point(p30, 3)
    minus = _certified_point(p30, 2)
    sf = SaturatedFunction(p30, mixed.mu, d=2)
    assert sample_gradient(sf, (plus, minus), 2) == (-5, 5)


def test_sample_gradient_zero_mu(p30):
    zero = SaturatedFunction(p30, FiniteSupport.zero(), d=2)
    w = _certified_point(p30, 1)
    assert sample_gradient(zero, (w, w), 2) == (0, 0)


def test_sample_gradient_undecided_flag(p30, e0):
    host = p30.stage(1).piece_host(0)
    interior = (host.lo * 2 + host.hi) / 3
    assert sample_gradient(e0, (interior,), 1) == (None,)


def test_lipschitz_norm_exact(e0, mixed):
    assert lipschitz_norm(e0) == 1
    assert lipschitz_norm(mixed) == 5


def test_lipschitz_lower_bound_steered(e0, mixed):
    assert lipschitz_lower_bound(e0) >= Fraction(95, 100)
    assert lipschitz_lower_bound(mixed) >= Fraction(95, 100) * 5
    assert lipschitz_lower_bound(e0) <= 1
    assert lipschitz_lower_bound(mixed) <= 5


def test_lipschitz_lower_bound_zero(p30):
    zero = SaturatedFunction(p30, FiniteSupport.zero())
    assert lipschitz_lower_bound(zero) == 0


def test_shift_to_ball_identity(p30, e0):
    shifted = shift_to_ball(e0, (0,), Fraction(1))
    x = (Fraction(2, 5),)
    plain = eval_f(e0, x, TOL)
    assert shifted.eval(x, TOL) == plain
    assert shifted.gradient_hull() == ((-1, 1),)


def test_shift_to_ball_derivative_set(p30):
    mu = FiniteSupport.of({0: 3})
    sf = SaturatedFunction(p30, mu)
    shifted = shift_to_ball(sf, (Fraction(2),), Fraction(3))
    seen = set()
    for member in (0, 1, 2, 3):
        w = _certified_point(p30, member)
        (g,) = shifted.gradient((w,), 2)
        seen.add(g)
    assert seen == {-1, 2, 5}
    assert shifted.gradient_hull() == ((-1, 5),)


def test_shift_to_ball_value_normalized_at_base(p30, e0):
    shifted = shift_to_ball(e0, (Fraction(2),), Fraction(3))
    assert shifted.eval(shifted.x0, TOL) == ValueBound(0, 0)
    # away from the base point the linear part enters exactly
    x = (shifted.x0[0] + Fraction(1, 8),)
    base_mu = shifted.base
    expected = eval_f(base_mu, x, TOL).shift(Fraction(2) * Fraction(1, 8))
    assert shifted.eval(x, TOL) == expected


def test_shift_to_ball_rejects_bad_inputs(p30, e0):
    with pytest.raises(ValueError):
        shift_to_ball(e0, (0, 0), Fraction(1))
    zero = SaturatedFunction(p30, FiniteSupport.zero())
    with pytest.raises(ValueError):
        shift_to_ball(zero, (0,), Fraction(1))
    assert shift_to_ball(zero, (0,), Fraction(0)).gradient_hull() == ((0, 0),)


def test_export_samples_csv(p30, e0):
    host = p30.stage(1).piece_host(0)
    interior = (host.lo * 2 + host.hi) / 3
    text = export_samples(e0, [(Fraction(1, 2),), (interior,)], TOL, depth=1)
    lines = text.strip().split("\n")
    assert lines[0] == "x1,f_lo,f_hi,g1"
    assert lines[1] == "1/2,0/1,0/1,U" or lines[1].startswith("1/2,0/1,0/1")
    assert lines[2].endswith(",U")
