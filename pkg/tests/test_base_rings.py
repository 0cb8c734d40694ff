import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from dynaport.base_rings import (
    QQ,
    FactorCapError,
    Poly,
    QuotField,
    RatFunc,
    factor_over_qt,
    factor_rational_poly,
    interpolate,
    is_irreducible,
    is_squarefree,
    poly_gcd,
    poly_xgcd,
    resultant,
    squarefree_decompose,
    squarefree_part,
)
from dynaport.base_rings.factor import factor_mod_p
from dynaport.base_rings.fields import ResidueRing

from conftest import T, poly

sx = sympy.Symbol("x")


def to_sympy(f: Poly):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in map(Fraction, reversed(f.coeffs))] or [0], sx, domain="QQ")


int_coeffs = st.lists(st.integers(-20, 20), min_size=1, max_size=7).filter(lambda v: any(v))


def P(v):
    return Poly(Fraction(c) for c in v)


# -- gcd ---------------------------------------------------------------------------


def test_gcd_examples():
    assert poly_gcd(poly(-1, 0, 1), poly(1, -2, 1)) == poly(-1, 1)
    assert poly_gcd(poly(0, 0, 0, 1), poly(0, 0, 1)) == poly(0, 0, 1)
    assert poly_gcd(poly(1, 0, 1), poly(0, 1, 1)) == poly(1)


def test_gcd_zero_convention():
    assert poly_gcd(Poly(), Poly()).is_zero()
    assert poly_gcd(poly(0, 2), Poly()) == poly(0, 1)


@given(int_coeffs, int_coeffs, int_coeffs)
def test_gcd_matches_sympy(a, b, c):
    f, g, h = P(a), P(b), P(c)
    F, G = f * h, g * h
    got = poly_gcd(F, G)
    want = sympy.gcd(to_sympy(F), to_sympy(G)).monic()
    assert to_sympy(got) == want
    assert (F % got).is_zero() and (G % got).is_zero()


@given(int_coeffs, int_coeffs)
def test_xgcd_bezout(a, b):
    f, g = P(a), P(b)
    d, s, t = poly_xgcd(f, g)
    assert s * f + t * g == d
    assert d == poly_gcd(f, g)


# -- squarefree ----------------------------------------------------------------------


def test_yun_examples():
    assert squarefree_decompose(poly(0, 0, 1, 1)) == [(poly(1, 1), 1), (poly(0, 1), 2)]
    assert squarefree_decompose(poly(1, 0, 1)) == [(poly(1, 0, 1), 1)]
    assert squarefree_decompose(poly(0, 0, 1, 2, 1)) == [(poly(0, 1, 1), 2)]


def test_yun_rejects_zero():
    with pytest.raises(ValueError):
        squarefree_decompose(Poly())


@given(st.lists(st.tuples(int_coeffs, st.integers(1, 3)), min_size=1, max_size=3))
def test_yun_reconstructs(parts):
    f = poly(3)
    for v, k in parts:
        f = f * P(v) ** k
    dec = squarefree_decompose(f)
    back = poly(f.lc)
    for a, k in dec:
        assert a.lc == 1
        assert is_squarefree(a)
        back = back * a**k
    assert back == f
    ks = [k for _, k in dec]
    assert ks == sorted(set(ks))
    for i in range(len(dec)):
        for j in range(i):
            assert poly_gcd(dec[i][0], dec[j][0]).degree == 0


@given(int_coeffs)
def test_squarefree_part_divides(v):
    f = P(v) ** 2 * P(v[:2] + [1])
    s = squarefree_part(f)
    assert (f % s).is_zero() if s.degree > 0 else True
    assert is_squarefree(s)


def sylvester_det(f: Poly, g: Poly) -> Fraction:
    # oracle: determinant of the Sylvester matrix, rows in descending powers
    m, n = f.degree, g.degree
    fa = [sympy.Rational(str(Fraction(c))) for c in reversed(f.coeffs)]
    ga = [sympy.Rational(str(Fraction(c))) for c in reversed(g.coeffs)]
    rows = [[0] * i + fa + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + ga + [0] * (m - 1 - i) for i in range(m)]
    return Fraction(str(sympy.Matrix(rows).det()))


# -- resultant -----------------------------------------------------------------------


def test_resultant_examples():
    assert resultant(poly(-2, 1), poly(-3, 1)) == -1
    assert resultant(poly(0, 0, 1), poly(1, 1)) == 1
    assert resultant(poly(1, 0, 1), poly(-1, 0, 1)) == 4


def test_resultant_rejects_zero():
    with pytest.raises(ValueError):
        resultant(Poly(), poly(1, 1))


@given(int_coeffs, int_coeffs)
def test_resultant_matches_sylvester_and_gcd(a, b):
    f, g = P(a), P(b)
    if f.degree < 1 or g.degree < 1:
        return
    r = resultant(f, g)
    assert Fraction(r) == sylvester_det(f, g)
    assert (r == 0) == (poly_gcd(f, g).degree > 0)


def test_resultant_zero_iff_common_root_randomized():
    rng = random.Random(11)
    for _ in range(200):
        f = P([rng.randint(-4, 4) for _ in range(rng.randint(2, 4))] + [1])
        g = P([rng.randint(-4, 4) for _ in range(rng.randint(2, 4))] + [1])
        if rng.random() < 0.4:
            h = P([rng.randint(-3, 3), 1])
            f, g = f * h, g * h
        assert (resultant(f, g) == 0) == (poly_gcd(f, g).degree > 0)


# -- factoring -----------------------------------------------------------------------


def test_factor_examples():
    _, facs = factor_rational_poly(poly(-1, 0, 1))
    assert facs == [(poly(-1, 1), 1), (poly(1, 1), 1)]
    assert is_irreducible(poly(1, 0, 1))
    _, facs = factor_rational_poly(poly(0, 1, 1, 2, 1))
    assert facs == [(poly(0, 1), 1), (poly(1, 1, 2, 1), 1)]


def test_factor_cap():
    with pytest.raises(FactorCapError, match="cap"):
        factor_rational_poly(poly(*([1] * 70)), cap=64)


@given(st.lists(st.tuples(int_coeffs, st.integers(1, 2)), min_size=1, max_size=3), st.integers(-5, 5).filter(bool))
def test_factor_remultiplies(parts, scale):
    f = poly(scale)
    for v, k in parts:
        f = f * P(v) ** k
    if f.degree < 1:
        return
    lc, facs = factor_rational_poly(f)
    back = poly(lc)
    for q, k in facs:
        back = back * q**k
        assert q.lc == 1
    assert back == f
    want = sympy.factor_list(to_sympy(f))[1]
    assert sorted(k for _, k in facs) == sorted(k for _, k in want)
    assert sorted(q.degree for q, _ in facs) == sorted(g.degree() for g, _ in want)


def test_factors_irreducible_spot_check():
    # degree <= 3 factors have no rational root; higher ones are compared to sympy
    f = poly(-2, 0, 1) * poly(1, 1, 0, 1) * poly(-5, 0, 0, 0, 1) * poly(3, 1)
    _, facs = factor_rational_poly(f)
    for q, _ in facs:
        if q.degree <= 3 and q.degree > 1:
            assert not sympy.Poly(to_sympy(q)).ground_roots()
        assert sympy.Poly(to_sympy(q)).is_irreducible
    assert len(facs) == 4


def test_factor_mod_p_product():
    f = [6, 11, 6, 1]  # (x+1)(x+2)(x+3)
    facs = factor_mod_p(f, 7)
    assert facs == [[1, 1], [2, 1], [3, 1]]


# -- quotient fields and Q(t) --------------------------------------------------------


def test_quotfield_rejects_reducible():
    with pytest.raises(ValueError):
        QuotField(poly(-1, 0, 1))


@pytest.mark.parametrize("mod", [poly(1, 0, 1), poly(-2, 0, 0, 1), poly(1, 1, 1, 1, 1)])
def test_quotfield_inverse(mod):
    k = QuotField(mod)
    rng = random.Random(mod.degree)
    for _ in range(1000):
        e = k.element([Fraction(rng.randint(-30, 30), rng.randint(1, 5)) for _ in range(mod.degree)])
        if not e:
            continue
        assert e * e.inverse() == k.one


def test_ratfunc_normal_form():
    r = RatFunc(T * T - poly(1), (T - poly(1)) * poly(2))
    assert r.num == (T + poly(1)) * Fraction(1, 2)
    assert r.den == poly(1)
    assert r.is_poly()
    with pytest.raises(ZeroDivisionError):
        RatFunc(T, Poly())


def test_factor_over_qt_linear_in_x():
    # x^2 - t^2 = (x - t)(x + t) over Q(t)
    t = RatFunc(T)
    f = Poly((-t * t, RatFunc(poly(0)), RatFunc(poly(1))))
    facs = factor_over_qt(f)
    assert len(facs) == 2 and all(q.degree == 1 and k == 1 for q, k in facs)


def test_residue_ring():
    r = ResidueRing(5, 2)
    assert r(27) == 2
    assert r.inv(2) * 2 % 25 == 1
    with pytest.raises(ValueError):
        ResidueRing(6)


def test_interpolate_roundtrip():
    f = poly(3, -1, 0, 2)
    xs = [Fraction(i) for i in range(4)]
    assert interpolate(xs, [f(x) for x in xs]) == f


def test_base_normalization():
    assert QQ.normalize_pair(6, -4) == (-3, 2)
    assert QQ.normalize_pair(-1, 0) == (1, 0)
