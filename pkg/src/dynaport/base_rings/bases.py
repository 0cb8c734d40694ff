"""The two base fields: Q (ring Z) and Q(t) (ring Q[t]).

A base bundles the ring/field conversions that the dynamics code needs so the
same iteration and critical-orbit logic runs over either track.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd

from .factor import DEFAULT_FACTOR_CAP, factor_rational_poly
from .fields import RatFunc
from .poly import ONE, Poly, poly_gcd, poly_lcm
from .qt_factor import factor_over_qt


class NumberFieldBase:
    """Base field Q; ring elements are Python ints, field elements Fractions."""

    name = "nf"
    zero = 0
    one = 1

    def is_ring_elem(self, c) -> bool:
        return isinstance(c, int)

    def ring_gcd(self, values) -> int:
        g = 0
        for v in values:
            g = igcd(g, v)
            if g == 1:
                break
        return g

    def normalize_pair(self, a: int, b: int) -> tuple[int, int]:
        if a == 0 and b == 0:
            raise ValueError("[0:0] is not a point of P^1")
        g = igcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        return a, b

    def normalize_vector(self, values: list[int], lead: int) -> list[int]:
        """Divide by the content and make ``values[lead]`` positive."""
        g = self.ring_gcd(values)
        if values[lead] < 0:
            g = -g
        return [v // g for v in values]

    def to_field(self, c) -> Fraction:
        return Fraction(c)

    def split_fraction(self, c) -> tuple[int, int]:
        c = Fraction(c)
        return c.numerator, c.denominator

    def clear_denominators(self, coeffs: list) -> list[int]:
        den = 1
        for c in coeffs:
            d = Fraction(c).denominator
            den = den * d // igcd(den, d)
        return [int(Fraction(c) * den) for c in coeffs]

    def field_poly(self, f: Poly) -> Poly:
        return f

    def factor(self, f: Poly, cap: int = DEFAULT_FACTOR_CAP) -> list[tuple[Poly, int]]:
        return factor_rational_poly(f, cap)[1]

    def field_str(self, c) -> str:
        return str(Fraction(c))

    def __repr__(self):
        return "Q"


class FunctionFieldBase:
    """Base field Q(t); ring elements are Polys in t, field elements RatFuncs."""

    name = "ff"
    zero = Poly()
    one = ONE

    def is_ring_elem(self, c) -> bool:
        return isinstance(c, Poly)

    def ring_gcd(self, values) -> Poly:
        g = Poly()
        for v in values:
            g = poly_gcd(g, v)
            if g == ONE:
                break
        return g

    def normalize_pair(self, a: Poly, b: Poly) -> tuple[Poly, Poly]:
        if a.is_zero() and b.is_zero():
            raise ValueError("[0:0] is not a point of P^1")
        g = poly_gcd(a, b)
        if g.degree > 0:
            a, b = a.exact_div(g), b.exact_div(g)
        lead = b.lc if not b.is_zero() else a.lc
        if lead != 1:
            inv = Fraction(1) / Fraction(lead)
            a, b = a * inv, b * inv
        return a, b

    def normalize_vector(self, values: list[Poly], lead: int) -> list[Poly]:
        g = self.ring_gcd(values)
        if g.degree > 0:
            values = [v.exact_div(g) for v in values]
        lc = values[lead].lc
        if lc != 1:
            inv = Fraction(1) / Fraction(lc)
            values = [v * inv for v in values]
        return values

    def to_field(self, c) -> RatFunc:
        if isinstance(c, RatFunc):
            return c
        if isinstance(c, Poly):
            return RatFunc(c)
        return RatFunc(Poly((c,)))

    def split_fraction(self, c) -> tuple[Poly, Poly]:
        c = self.to_field(c)
        return c.num, c.den

    def clear_denominators(self, coeffs: list) -> list[Poly]:
        rf = [self.to_field(c) for c in coeffs]
        den = ONE
        for c in rf:
            den = poly_lcm(den, c.den)
        return [(c.num * den).exact_div(c.den) for c in rf]

    def field_poly(self, f: Poly) -> Poly:
        return Poly(self.to_field(c) for c in f.coeffs)

    def factor(self, f: Poly, cap: int = DEFAULT_FACTOR_CAP) -> list[tuple[Poly, int]]:
        return factor_over_qt(self.field_poly(f), cap)

    def field_str(self, c) -> str:
        return self.to_field(c).to_str()

    def __repr__(self):
        return "Q(t)"


QQ = NumberFieldBase()
QQt = FunctionFieldBase()
