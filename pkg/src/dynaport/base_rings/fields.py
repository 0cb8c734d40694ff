"""Fields built on top of :class:`Poly`: Q(t), Q[x]/(f) towers, Z/p and Z/p^2."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from sympy import isprime

from .poly import ONE, Poly, fdiv, poly_gcd, poly_xgcd


class RatFunc:
    """Element of Q(t) as num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized: bool = False):
        if not isinstance(num, Poly):
            num = Poly((num,))
        if den is None:
            den = ONE
        elif not isinstance(den, Poly):
            den = Poly((den,))
        if not _normalized:
            if den.is_zero():
                raise ZeroDivisionError("RatFunc with zero denominator")
            if num.is_zero():
                den = ONE
            elif den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lc = den.lc
            if lc != 1:
                num = num * fdiv(1, lc)
                den = den * fdiv(1, lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def t(cls) -> "RatFunc":
        return cls(Poly.x())

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other, ONE, _normalized=True)
        return RatFunc(Poly((other,)), ONE, _normalized=True)

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den, _normalized=self.den.degree == 0)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc(self.num * o.num, ONE, _normalized=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o:
            raise ZeroDivisionError("division by zero in Q(t)")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RatFunc(self.den, self.num) ** (-e)
        return RatFunc(self.num**e, self.den**e, _normalized=True)

    def __eq__(self, other):
        o = self._coerce(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.degree == 0 and self.num.degree <= 0:
            return hash(self.num[0])
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.to_str()})"

    def to_str(self, var: str = "t") -> str:
        n = self.num.to_str(var)
        if self.den.degree == 0:
            return n
        return f"({n})/({self.den.to_str(var)})"

    __str__ = to_str


@total_ordering
class QElt:
    """Element of a :class:`QuotField`, reduced modulo the field's modulus."""

    __slots__ = ("field", "rep")

    def __init__(self, field: "QuotField", rep: Poly):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("QElt is immutable")

    def _coerce(self, other) -> "QElt":
        if isinstance(other, QElt):
            if other.field is not self.field and other.field.modulus != self.field.modulus:
                raise TypeError("mixing elements of different quotient fields")
            return other
        return self.field(other)

    def __add__(self, other):
        return QElt(self.field, self.rep + self._coerce(other).rep)

    __radd__ = __add__

    def __neg__(self):
        return QElt(self.field, -self.rep)

    def __sub__(self, other):
        return QElt(self.field, self.rep - self._coerce(other).rep)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return QElt(self.field, (self.rep * self._coerce(other).rep) % self.field.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "QElt":
        if self.rep.is_zero():
            raise ZeroDivisionError("inverse of zero in quotient field")
        g, s, _ = poly_xgcd(self.rep, self.field.modulus)
        if g.degree != 0:
            raise ArithmeticError("modulus is not irreducible: zero divisor found")
        return QElt(self.field, s % self.field.modulus)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __bool__(self):
        return not self.rep.is_zero()

    def __eq__(self, other):
        try:
            return self.rep == self._coerce(other).rep
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self.rep.coeffs < self._coerce(other).rep.coeffs

    def __hash__(self):
        if self.rep.degree <= 0:
            return hash(self.rep[0])
        return hash(self.rep)

    def __repr__(self):
        return f"[{self.rep.to_str('a')}]"


class QuotField:
    """The field K[x]/(modulus) for an irreducible modulus over K = Q or Q(t)."""

    def __init__(self, modulus: Poly, check: bool = True):
        if modulus.degree < 1:
            raise ValueError("quotient field modulus must have degree >= 1")
        modulus = modulus.monic()
        if check and not _is_irreducible_over_base(modulus):
            raise ValueError(f"modulus {modulus} is reducible")
        self.modulus = modulus
        self.degree = modulus.degree
        self.one = QElt(self, Poly((1,)))
        self.zero = QElt(self, Poly())
        self.gen = QElt(self, Poly.x() % modulus) if modulus.degree > 1 else QElt(self, Poly((-modulus[0],)))

    def __call__(self, value) -> QElt:
        if isinstance(value, QElt):
            return value
        if isinstance(value, Poly):
            return QElt(self, value % self.modulus)
        return QElt(self, Poly((value,)))

    def element(self, coeffs) -> QElt:
        return self(Poly(coeffs))

    def __eq__(self, other):
        return isinstance(other, QuotField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"QuotField({self.modulus})"


def _is_irreducible_over_base(f: Poly) -> bool:
    if f.is_rational():
        from .factor import is_irreducible

        return is_irreducible(f)
    from .qt_factor import factor_over_qt

    facs = factor_over_qt(f)
    return len(facs) == 1 and facs[0][1] == 1


class ResidueRing:
    """Z/p or Z/p^2 for a prime p; elements are ints in [0, modulus)."""

    def __init__(self, p: int, power: int = 1):
        if power not in (1, 2):
            raise ValueError("residue ring modulus must be p or p^2")
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.power = power
        self.modulus = p**power

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
        return int(value) % self.modulus

    def inv(self, a: int) -> int:
        return pow(a, -1, self.modulus)

    def __repr__(self):
        return f"ResidueRing({self.p}^{self.power})"
