import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dynaport.base_rings import QQ, QQt, Poly, RatFunc, poly_gcd, squarefree_decompose
from dynaport.dynamics import (
    INF,
    CapError,
    DegreeError,
    ProjPoint,
    bad_primes,
    critical_locus,
    critical_value_poly,
    divisors,
    dynatomic,
    homogeneous_resultant,
    iterate,
    iterate_forms,
    normalize_map,
    orbit_poly,
    period_numerator,
)
from dynaport.portraits import reduce_point, reduced_step

from conftest import FIXTURE_MAPS, T, ff, nf, poly, pt

X = Poly((0, 1))


def test_normalize_examples():
    phi = nf("x^2+1")
    # F[i], G[i] multiply X^i Z^(d-i): F = X^2 + Z^2, G = Z^2
    assert phi.F == (1, 0, 1) and phi.G == (1, 0, 0) and phi.degree == 2
    assert normalize_map(poly(2, 0, 2), poly(2)) == phi
    with pytest.raises(DegreeError, match="degree"):
        normalize_map(poly(1), poly(0, 1))
    with pytest.raises(ZeroDivisionError):
        normalize_map(poly(1, 0, 1), Poly())


def test_normalize_cancels_common_factor():
    # (x^3 - x)/(x - 1) = x^2 + x
    assert normalize_map(poly(0, -1, 0, 1), poly(-1, 1)) == nf("x^2+x")


def test_iterate_examples():
    phi = nf("x^2+1")
    assert iterate(phi, pt(2), 3) == pt(677)
    assert iterate(phi, pt("5/3"), 0) == pt("5/3")
    assert iterate(nf("x^2"), pt(0), 5) == pt(0)


def _naive(text, x: Fraction, k: int):
    # oracle: the map as a Python function on Fractions
    fns = {
        "x^2": lambda v: v * v,
        "x^2+1": lambda v: v * v + 1,
        "x^2-2": lambda v: v * v - 2,
        "x^3-3x": lambda v: v**3 - 3 * v,
    }
    for _ in range(k):
        x = fns[text](x)
    return x


@pytest.mark.parametrize("text", ["x^2", "x^2+1", "x^2-2", "x^3-3x"])
def test_iterate_matches_naive(text):
    phi = nf(text)
    for a in [Fraction(1, 2), Fraction(-3, 7), Fraction(2)]:
        for k in range(5):
            assert iterate(phi, pt(a), k).value() == _naive(text, a, k)


def test_iterate_through_infinity():
    phi = nf("(x^2-1)/x")
    assert iterate(phi, pt(1), 1) == pt(0)
    assert iterate(phi, pt(1), 2).is_infinity()
    assert iterate(phi, pt(1), 3).is_infinity()


@given(st.sampled_from(FIXTURE_MAPS + ["x^3-3x"]), st.fractions(max_denominator=30).filter(lambda q: abs(q) < 50), st.integers(0, 4), st.integers(0, 4))
def test_iterate_composition(text, a, j, k):
    phi = nf(text)
    P = pt(a)
    assert iterate(phi, P, j + k) == iterate(phi, iterate(phi, P, j), k)


@pytest.mark.parametrize("text", FIXTURE_MAPS + ["x^3-3x"])
def test_iterate_form_degrees(text):
    phi = nf(text)
    for k in range(1, 5):
        fk, gk = iterate_forms(phi, k)
        assert max(fk.degree, gk.degree) == phi.degree**k
        assert poly_gcd(phi.base.field_poly(fk), phi.base.field_poly(gk)).degree == 0


def test_ff_iterate():
    phi = ff("x^2+t")
    got = iterate(phi, ProjPoint.from_value(RatFunc(Poly()), QQt), 3).value()
    assert got == RatFunc(poly(0, 1, 1, 2, 1))


def test_critical_locus_examples():
    c = critical_locus(nf("x^2+1"))
    assert c.W == poly(0, 1) and c.infinity_is_critical
    c = critical_locus(nf("x^2"))
    assert c.W == poly(0, 1) and c.infinity_is_critical
    c = critical_locus(nf("x^3-3x"))
    assert c.W == poly(-1, 0, 1) and c.infinity_is_critical
    c = critical_locus(nf("(x^2-1)/x"))
    # Lattes-type map: four finite critical points +-i, and infinity is not critical
    assert c.W.degree + c.infinity_is_critical <= 2 * 2 - 2


def test_critical_value_poly_examples():
    assert critical_value_poly(nf("x^2"), 1) == (poly(0, 1), True)
    assert critical_value_poly(nf("x^2+1"), 1) == (poly(-1, 1), True)
    f, inf = critical_value_poly(nf("x^2+1"), 2)
    assert f == poly(-1, 1) * poly(-2, 1) and inf
    with pytest.raises(CapError):
        critical_value_poly(nf("x^2+1"), 9)


def test_orbit_poly_examples():
    phi = nf("x^2+1")
    assert orbit_poly(phi, 1)[0] == poly(-1, 1)
    assert orbit_poly(phi, 3)[0] == poly(-5, 1)
    for k in range(1, 5):
        assert orbit_poly(nf("x^2"), k)[0] == poly(0, 1)


def test_orbit_poly_irrational_critical_points():
    # x^3 + x + 1: critical points are the roots of 3x^2 + 1
    phi = nf("x^3+x+1")
    f, _ = orbit_poly(phi, 1)
    # oracle: phi(c) = c^3 + c + 1 = (2/3)c + 1 on 3c^2 = -1, so the images are 1 +- 2/(3 sqrt 3) i
    assert f == poly(Fraction(31, 27), -2, 1)


def test_bad_primes_examples():
    assert bad_primes(nf("x^2+1")) == []
    assert bad_primes(nf("x^2+1/3")) == [3]
    assert bad_primes(nf("x^3")) == []
    assert set(bad_primes(nf("(x^2-1)/x"))) <= {2}


def test_bad_primes_ff():
    assert bad_primes(ff("x^2+t")) == ["inf"]


def test_homogeneous_resultant_x2p13():
    assert abs(homogeneous_resultant(nf("x^2+1/3"))) == 3**4


@pytest.mark.parametrize("text", ["x^2+1", "x^2-2", "x^2", "x^3-3x"])
def test_reduction_commutes(text):
    phi = nf(text)
    bad = set(bad_primes(phi))
    rng = random.Random(len(text))
    primes = [p for p in (3, 5, 7, 11, 13, 101) if p not in bad]
    for _ in range(200):
        P = pt(Fraction(rng.randint(-99, 99), rng.randint(1, 40)))
        for p in primes:
            assert reduce_point(phi(P), p) == reduced_step(phi, reduce_point(P, p), p)


def test_reduction_commutes_at_infinity():
    phi = nf("(x^2-1)/x")
    for p in (3, 5, 7):
        assert reduced_step(phi, INF, p) is INF
        assert reduced_step(phi, 0, p) is INF


def test_dynatomic_examples():
    assert dynatomic(nf("x^2+1"), 1) == poly(1, -1, 1)
    assert dynatomic(nf("x^2+1"), 2) == poly(2, 1, 1)
    assert dynatomic(nf("x^2"), 1) == poly(0, -1, 1)
    assert dynatomic(ff("x^2+t"), 2) == Poly((RatFunc(poly(1, 1)), RatFunc(poly(1)), RatFunc(poly(1))))


@pytest.mark.parametrize("text", ["x^2+1", "x^2-2", "x^2+x"])
def test_dynatomic_product(text):
    phi = nf(text)
    for n in range(1, 7):
        prod = poly(1)
        for k in divisors(n):
            prod = prod * dynatomic(phi, k)
        pn = period_numerator(phi, n)
        assert prod.monic() == pn.monic()


def test_dynatomic_factors_divide_period_poly():
    phi = nf("x^2-2")
    for n in range(1, 5):
        d = dynatomic(phi, n)
        for q, _ in squarefree_decompose(d):
            assert (period_numerator(phi, n) % q).is_zero()


def test_projpoint_normal_form():
    assert ProjPoint.make(6, -4) == pt("-3/2")
    assert ProjPoint.make(-2, 0).is_infinity()
    assert str(pt("6/4")) == "3/2"
    assert ProjPoint.make(T * T, T).value() == RatFunc(T)
