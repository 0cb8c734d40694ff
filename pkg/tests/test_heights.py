import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dynaport.base_rings import QQt, Poly
from dynaport.dynamics import ProjPoint, iterate
from dynaport.heights import (
    PrecisionError,
    canonical_height,
    common_reduction_bound,
    escape_threshold,
    ff_root_height,
    height_gap_constant,
    infinity_in_orbit,
    is_preperiodic,
    orbit_behavior,
    root_height_bounds,
    weil_height,
)

from conftest import T, ff, nf, poly, pt, tpt

GAP_MAPS = ["x^2", "x^2+1", "x^2-2", "(x^2-1)/x", "x^3-3x"]


def test_weil_height_examples():
    assert weil_height(pt("3/2")) == pytest.approx(math.log(3))
    assert weil_height(pt("inf")) == 0
    assert weil_height(ProjPoint.make(6, 4)) == pytest.approx(math.log(3))
    assert weil_height(pt(0)) == 0


def test_weil_height_huge_integer():
    n = 3**5000
    assert weil_height(ProjPoint.make(n, 1)) == pytest.approx(5000 * math.log(3), rel=1e-12)


def test_weil_height_ff():
    # [t^2 + 1 : t] has height 2; places are weighted by degree
    assert weil_height(tpt("(t^2+1)/t")) == 2
    assert weil_height(tpt("t^3/(t-1)^2")) == 3
    assert weil_height(tpt("5")) == 0


def test_gap_constant_nonnegative():
    for text in GAP_MAPS:
        g = height_gap_constant(nf(text))
        assert g.C_map >= 0 and g.C_map == max(g.C_up, g.C_low, 0.0)


@pytest.mark.parametrize("text", GAP_MAPS)
def test_gap_constant_bounds_sampled_gap(text):
    phi = nf(text)
    C = height_gap_constant(phi).C_map
    rng = random.Random(text)
    worst = 0.0
    for _ in range(1000):
        P = ProjPoint.make(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        worst = max(worst, abs(weil_height(phi(P)) - phi.degree * weil_height(P)))
    assert worst <= C + 1e-12


def test_gap_constant_ff_sampled():
    phi = ff("x^2+t")
    C = height_gap_constant(phi).C_map
    rng = random.Random(5)
    for _ in range(200):
        a = Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, 5))] + [1])
        b = Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, 4))] + [1])
        P = ProjPoint.make(a, b, QQt)
        assert abs(weil_height(phi(P)) - 2 * weil_height(P)) <= C


def test_canonical_height_power_map():
    phi = nf("x^2")
    assert abs(canonical_height(phi, pt(2), 1e-9).value - math.log(2)) <= 1e-9
    assert canonical_height(phi, pt(1), 1e-9).value == 0


def _naive_hhat(c: int, x: int, N: int) -> float:
    # oracle: plain integer iteration of x^2 + c, no gmpy2, no gap constant
    for _ in range(N):
        x = x * x + c
    return (x.bit_length() + math.log2(x / 2 ** x.bit_length())) * math.log(2) / 2**N


def test_canonical_height_x2p1_at_zero():
    est = canonical_height(nf("x^2+1"), pt(0), 1e-10)
    assert est.error_bound <= 1e-10
    assert abs(est.value - _naive_hhat(1, 0, 18)) <= 1e-10 + 1e-5
    assert est.value == pytest.approx(0.20367726136974, abs=1e-10)


@pytest.mark.parametrize("text", GAP_MAPS)
def test_canonical_height_consistency(text):
    phi = nf(text)
    for a in ["3", "1/2", "-7/5"]:
        lo = canonical_height(phi, pt(a), 1e-4)
        hi = canonical_height(phi, pt(a), 1e-8)
        assert abs(lo.value - hi.value) <= 2e-4


@given(st.sampled_from(GAP_MAPS), st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100))
def test_canonical_height_functional_equation(text, a):
    phi = nf(text)
    P = pt(a)
    try:
        h0 = canonical_height(phi, P, 1e-6)
        h1 = canonical_height(phi, phi(P), 1e-6)
    except PrecisionError:
        return
    assert abs(h1.value - phi.degree * h0.value) <= h1.error_bound + phi.degree * h0.error_bound + 1e-9


def test_canonical_height_precision_error_partial():
    phi = nf("x^2+1")
    with pytest.raises(PrecisionError, match="precision") as info:
        canonical_height(phi, pt(2), 1e-12, bit_cap=500, exact_only=True)
    part = info.value.partial
    assert part.iterations > 0 and part.error_bound > 0
    best = canonical_height(phi, pt(2), 1e-9)
    assert abs(part.value - best.value) <= part.error_bound + best.error_bound


@pytest.mark.parametrize("text,a", [("x^2+1/3", "2"), ("(x^2-1)/x", "3/2"), ("(3x^2+1)/(2x)", "5"), ("x^3-3x", "1/2")])
def test_float_tail_matches_exact(text, a):
    phi = nf(text)
    fast = canonical_height(phi, pt(a), 1e-6)
    exact = canonical_height(phi, pt(a), 1e-6, exact_only=True)
    assert fast.iterations == exact.iterations
    assert abs(fast.value - exact.value) <= fast.error_bound - exact.error_bound + 1e-12


def test_canonical_height_rejects_bad_tol():
    with pytest.raises(ValueError):
        canonical_height(nf("x^2"), pt(2), 0)


def test_canonical_height_ff():
    # deg_t phi^n(0) = 2^(n-1) for x^2 + t, so the canonical height of 0 is 1/2
    est = canonical_height(ff("x^2+t"), tpt("0"), 1e-3)
    assert abs(est.value - 0.5) <= est.error_bound + 1e-12
    # phi(t) = t^2 + t, and deg_t phi^n(t) = 2^n, so the canonical height of t is 1
    est = canonical_height(ff("x^2+t"), tpt("t"), 1e-3)
    assert abs(est.value - 1.0) <= est.error_bound + 1e-12


def test_root_height_bounds_examples():
    lo, hi = root_height_bounds(poly(-3, 1))
    assert lo <= math.log(3) <= hi and hi - lo <= 2 * math.log(2)
    lo, hi = root_height_bounds(poly(-2, 0, 1))
    assert lo <= 0.5 * math.log(2) <= hi
    lo, hi = root_height_bounds(poly(1, 0, 1))
    assert lo <= 0 <= hi
    with pytest.raises(ValueError):
        root_height_bounds(poly(5))


def test_root_height_bounds_against_mahler():
    # oracle: Mahler measure of an irreducible primitive f from numerical roots
    import sympy

    x = sympy.Symbol("x")
    rng = random.Random(3)
    tried = 0
    while tried < 50:
        v = [rng.randint(-9, 9) for _ in range(rng.randint(2, 6))] + [rng.randint(1, 9)]
        sp = sympy.Poly(list(reversed(v)), x)
        if not sp.is_irreducible or math.gcd(*v) != 1:
            continue
        tried += 1
        roots = sp.nroots(n=30)
        mahler = abs(v[-1]) * math.prod(max(1.0, abs(complex(r))) for r in roots)
        h = math.log(mahler) / (len(v) - 1)
        lo, hi = root_height_bounds(Poly(Fraction(c) for c in v))
        assert lo - 1e-9 <= h <= hi + 1e-9


def test_ff_root_height():
    # x^2 - t: sqrt(t) has height 1/2
    f = Poly((QQt.to_field(-T), QQt.to_field(0), QQt.to_field(1)))
    assert ff_root_height(f) == 0.5


def test_orbit_behavior():
    b = orbit_behavior(nf("x^2-2"), pt(0))
    assert b.preperiodic and (b.preperiod, b.period) == (2, 1)
    assert not is_preperiodic(nf("x^2+1"), pt(0))
    assert is_preperiodic(nf("x^2"), pt(-1))
    assert escape_threshold(nf("x^2")) == 0


def test_infinity_in_orbit():
    assert infinity_in_orbit(nf("(x^2-1)/x"), pt(1)) == 2
    assert infinity_in_orbit(nf("x^2+1"), pt(2)) is None
    assert infinity_in_orbit(nf("x^2+1"), pt("inf")) == 0


def _random_q(rng, size):
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


def test_common_reduction_bound_fuzz_q():
    rng = random.Random(31)
    for _ in range(1000):
        x, y = _random_q(rng, 10**4), _random_q(rng, 10**4)
        if x == y:
            continue
        lhs, rhs = common_reduction_bound(pt(x), pt(y))
        assert lhs <= rhs + 1e-9


def test_common_reduction_bound_fuzz_qt():
    rng = random.Random(32)
    for _ in range(500):
        num = [Poly([rng.randint(-2, 2) for _ in range(rng.randint(1, 4))] + [1]) for _ in range(2)]
        den = [Poly([rng.randint(-2, 2) for _ in range(rng.randint(0, 3))] + [1]) for _ in range(2)]
        x, y = ProjPoint.make(num[0], den[0], QQt), ProjPoint.make(num[1], den[1], QQt)
        if x == y:
            continue
        lhs, rhs = common_reduction_bound(x, y)
        assert lhs <= rhs


def test_common_reduction_bound_rejects_equal():
    with pytest.raises(ValueError):
        common_reduction_bound(pt(2), pt(2))


def test_iterate_height_grows_past_threshold():
    phi = nf("x^2+1")
    thr = escape_threshold(phi)
    P = pt(3)
    assert weil_height(P) > thr
    for k in range(5):
        Q = iterate(phi, P, k + 1)
        assert weil_height(Q) > weil_height(iterate(phi, P, k))
