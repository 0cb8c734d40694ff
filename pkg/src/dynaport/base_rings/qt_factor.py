"""Factorization of polynomials in x over Q(t), delegated to sympy.

Bivariate factoring is the one place the package leans on an external
algebra system; every other routine is native.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .factor import DEFAULT_FACTOR_CAP, FactorCapError
from .fields import RatFunc
from .poly import Poly, poly_lcm

_X, _T = sympy.symbols("x t")


def _as_ratfunc(c) -> RatFunc:
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, Poly):
        return RatFunc(c)
    return RatFunc(Poly((c,)))


def to_sympy(f: Poly) -> sympy.Poly:
    """Clear t-denominators and convert to a sympy polynomial in (x, t)."""
    coeffs = [_as_ratfunc(c) for c in f.coeffs]
    den = Poly((1,))
    for c in coeffs:
        den = poly_lcm(den, c.den)
    terms = {}
    for i, c in enumerate(coeffs):
        num = (c.num * den).exact_div(c.den)
        for j, a in enumerate(num.coeffs):
            if a:
                q = Fraction(a)
                terms[(i, j)] = sympy.Rational(q.numerator, q.denominator)
    return sympy.Poly.from_dict(terms, _X, _T, domain="QQ") if terms else sympy.Poly(0, _X, _T, domain="QQ")


def from_sympy(p: sympy.Poly) -> Poly:
    """Convert a sympy polynomial in (x, t) to a Poly in x with RatFunc coefficients."""
    deg = p.degree(_X)
    cols: list[dict[int, Fraction]] = [dict() for _ in range(deg + 1)]
    for (i, j), a in p.terms():
        cols[i][j] = Fraction(int(a.p), int(a.q))
    out = []
    for col in cols:
        n = max(col) + 1 if col else 0
        out.append(RatFunc(Poly(col.get(j, 0) for j in range(n))))
    return Poly(out)


def factor_over_qt(f: Poly, cap: int = DEFAULT_FACTOR_CAP) -> list[tuple[Poly, int]]:
    """Monic (in x) irreducible factors over Q(t) with multiplicities.

    Factors of degree 0 in x (pure functions of t) are dropped.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree > cap:
        raise FactorCapError(f.degree, cap)
    sp = to_sympy(f)
    _, facs = sympy.factor_list(sp.as_expr(), _X, _T)
    out = []
    for fac, mult in facs:
        fp = sympy.Poly(fac, _X, _T, domain="QQ")
        if fp.degree(_X) <= 0:
            continue
        out.append((from_sympy(fp).monic(), int(mult)))
    out.sort(key=lambda item: (item[0].degree, str(item[0])))
    return out
