"""Dense univariate polynomials over an exact field.

Coefficients are stored in ascending degree order.  Any coefficient type
with exact ``+ - * /`` works; integers are promoted to ``Fraction`` on
division so that ``Poly`` over Q never produces floats.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd as igcd
from typing import Iterable, Sequence


def fdiv(a, b):
    """Exact field division that keeps Q elements as ``Fraction``."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def _is_rational(c) -> bool:
    return isinstance(c, (int, Fraction))


class Poly:
    """Immutable dense polynomial; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def linear_root(cls, r) -> "Poly":
        """The monic polynomial x - r."""
        return cls((-r, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_rational(self) -> bool:
        return all(_is_rational(c) for c in self.coeffs)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return Poly()
            return Poly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: "Poly"):
        if not isinstance(other, Poly):
            other = Poly((other,))
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lcb = other.lc
        if len(rem) - 1 < db:
            return Poly(), self
        quot = [0] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = fdiv(c, lcb)
            quot[k - db] = q
            for j, bj in enumerate(other.coeffs):
                rem[k - db + j] = rem[k - db + j] - q * bj
        return Poly(quot), Poly(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other: "Poly") -> bool:
        """True when ``self`` divides ``other``."""
        return (other % self).is_zero()

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.lc
        if lc == 1:
            return self
        return Poly(fdiv(c, lc) for c in self.coeffs)

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def map_coeffs(self, fn) -> "Poly":
        return Poly(fn(c) for c in self.coeffs)

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if self.is_zero():
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.to_str()})"

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not _is_rational(c) and getattr(c, "den", None) is not None and c.den.degree == 0 and c.num.degree <= 0:
                c = c.num[0]  # a constant of Q(t)
            cs = str(c)
            if _is_rational(c):
                neg = c < 0
                mag = -c if neg else c
                if mono and mag == 1:
                    body = mono
                else:
                    body = str(mag) + ("*" + mono if mono else "")
                parts.append(("-" if neg else "+", body))
            elif " " not in cs and "/" not in cs:
                # a single term such as t or -3*t^2 needs no brackets
                neg = cs.startswith("-")
                parts.append(("-" if neg else "+", cs.lstrip("-") + ("*" + mono if mono else "")))
            else:
                body = f"({cs})" + ("*" + mono if mono else "")
                parts.append(("+", body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


X = Poly.x()
ONE = Poly((1,))


# -- integer helpers -----------------------------------------------------------


def content_and_primitive(f: Poly) -> tuple[Fraction, list[int]]:
    """Write f = c * g with g a primitive integer polynomial with lc(g) > 0."""
    if f.is_zero():
        return Fraction(0), []
    den = 1
    for c in f.coeffs:
        d = Fraction(c).denominator
        den = den * d // igcd(den, d)
    ints = [int(Fraction(c) * den) for c in f.coeffs]
    g = 0
    for v in ints:
        g = igcd(g, v)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, den), [v // g for v in ints]


def int_content(v: Sequence[int]) -> int:
    g = 0
    for c in v:
        g = igcd(g, c)
        if g == 1:
            break
    return g


def _strip(v: list) -> list:
    while v and not v[-1]:
        v.pop()
    return v


def _zz_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b over Z."""
    r = list(a)
    db = len(b) - 1
    lcb = b[-1]
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lcb for x in r]
        for j, bj in enumerate(b):
            r[shift + j] -= c * bj
        r.pop()
        _strip(r)
    return r


def _zz_primitive(v: list[int]) -> list[int]:
    g = int_content(v)
    if v and v[-1] < 0:
        g = -g
    return [c // g for c in v] if g not in (0, 1) else list(v)


_COPRIME_PRIMES = (2147483647, 2147483629, 2147483587)


def _mod_gcd_degree(a: list[int], b: list[int], p: int) -> int:
    from .factor import pm_gcd

    return len(pm_gcd([c % p for c in a], [c % p for c in b], p)) - 1


def _gcd_qq(f: Poly, g: Poly) -> Poly:
    _, a = content_and_primitive(f)
    _, b = content_and_primitive(g)
    if len(a) < len(b):
        a, b = b, a
    for p in _COPRIME_PRIMES:
        if a[-1] % p and b[-1] % p:
            if _mod_gcd_degree(a, b, p) == 0:
                return ONE
            break
    while b:
        r = _zz_primitive(_zz_prem(a, b))
        a, b = b, r
    return Poly(a).monic()


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; ``poly_gcd(0, 0) == 0``."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_rational() and g.is_rational():
        return _gcd_qq(f, g)
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (h, s, t) with s*f + t*g = h = monic gcd(f, g)."""
    r0, r1 = f, g
    s0, s1 = ONE, Poly()
    t0, t1 = Poly(), ONE
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lc
    inv = fdiv(1, lc)
    return r0 * inv, s0 * inv, t0 * inv


def poly_lcm(f: Poly, g: Poly) -> Poly:
    if f.is_zero() or g.is_zero():
        return Poly()
    return (f * g).exact_div(poly_gcd(f, g)).monic()


def squarefree_part(f: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of f."""
    if f.degree <= 0:
        return ONE if not f.is_zero() else f
    return f.monic().exact_div(poly_gcd(f, f.deriv())).monic()


def is_squarefree(f: Poly) -> bool:
    """gcd(f, f') == 1, certified modulo a prime when possible."""
    if f.is_zero():
        return False
    if f.degree <= 1:
        return True
    if f.is_rational():
        _, a = content_and_primitive(f)
        da = [i * c for i, c in enumerate(a)][1:]
        for p in _COPRIME_PRIMES:
            if a[-1] % p and _mod_gcd_degree(a, da, p) == 0:
                return True
    return poly_gcd(f, f.deriv()).degree == 0


def squarefree_decompose(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm.

    Returns monic, pairwise coprime, squarefree a_i with strictly increasing
    multiplicities such that f = lc(f) * prod a_i^m_i.
    """
    if f.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    if f.degree == 0:
        return out
    df = f.deriv()
    a0 = poly_gcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.deriv()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.deriv()
        if a.degree > 0:
            out.append((a.monic(), i))
        i += 1
    return out


def resultant(f: Poly, g: Poly):
    """Res(f, g) = lc(f)^deg g * prod_{f(r)=0} g(r), over a field."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant with the zero polynomial")
    res = 1
    while True:
        if g.degree == 0:
            return res * g.lc ** f.degree
        r = f % g
        if r.is_zero():
            return 0
        if (f.degree * g.degree) % 2:
            res = -res
        res = res * g.lc ** (f.degree - r.degree)
        f, g = g, r


def interpolate(xs: Sequence, ys: Sequence) -> Poly:
    """Lagrange interpolation through (xs[i], ys[i])."""
    out = Poly()
    for i, xi in enumerate(xs):
        basis = ONE
        denom = 1
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * Poly((-xj, 1))
                denom = denom * (xi - xj)
        out = out + basis * fdiv(ys[i], denom)
    return out


def det_bareiss(rows: Sequence[Sequence]):
    """Fraction-free determinant; entries need exact division."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                if isinstance(num, int) and isinstance(prev, int):
                    m[i][j] = num // prev
                elif isinstance(num, Poly):
                    m[i][j] = num.exact_div(prev if isinstance(prev, Poly) else Poly((prev,)))
                else:
                    m[i][j] = num / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> list:
    """Gaussian elimination over an exact field; square nonsingular systems."""
    n = len(rows)
    m = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ArithmeticError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = fdiv(1, m[col][col])
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                fct = m[r][col]
                m[r] = [a - fct * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def random_poly(rng: random.Random, degree: int, bound: int = 9) -> Poly:
    """Random integer polynomial of exact degree (helper for property tests)."""
    c = [rng.randint(-bound, bound) for _ in range(degree)]
    lead = 0
    while not lead:
        lead = rng.randint(-bound, bound)
    return Poly(c + [lead])
