"""Rational maps on P^1 over Q or Q(t).

A map is stored as a coprime pair of binary forms F(X, Z), G(X, Z) of degree
d with ring coefficients (Z for Q, Q[t] for Q(t)); coefficient lists are
indexed so that ``F[i]`` multiplies X^i Z^(d-i).  Root sets on P^1 are
carried as a polynomial plus an explicit flag for the point at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from threading import Lock, RLock
from typing import Union

from sympy import factorint

from .base_rings import (
    ONE,
    QQ,
    QQt,
    FactorCapError,
    Poly,
    QElt,
    QuotField,
    RatFunc,
    content_and_primitive,
    interpolate,
    poly_gcd,
    poly_lcm,
    resultant,
    squarefree_part,
)
from .base_rings.bases import FunctionFieldBase, NumberFieldBase
from .base_rings.poly import det_bareiss

Base = Union[NumberFieldBase, FunctionFieldBase]

DEFAULT_CRITICAL_VALUE_CAP = 4
DEFAULT_DYNATOMIC_CAP = 8


class DegreeError(ValueError):
    pass


class CapError(ValueError):
    """A configured cap was exceeded; ``cap`` names it."""

    def __init__(self, cap: str, value: int, limit: int):
        super().__init__(f"cap exceeded: {cap}={value} > {limit}")
        self.cap = cap
        self.value = value
        self.limit = limit


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def base_of(c) -> Base:
    return QQ if isinstance(c, int) else QQt


@dataclass(frozen=True)
class ProjPoint:
    """[a : b] in primitive, sign/monic-normalized coordinates."""

    a: object
    b: object

    @classmethod
    def make(cls, a, b, base: Base | None = None) -> "ProjPoint":
        base = base or base_of(a)
        a, b = base.normalize_pair(a, b)
        return cls(a, b)

    @classmethod
    def from_value(cls, value, base: Base = QQ) -> "ProjPoint":
        """Point for a field element (Fraction / RatFunc / int / Poly) or INF."""
        if value is INF:
            return cls.infinity(base)
        num, den = base.split_fraction(value)
        return cls.make(num, den, base)

    @classmethod
    def infinity(cls, base: Base = QQ) -> "ProjPoint":
        return cls(base.one, base.zero)

    @property
    def base(self) -> Base:
        return base_of(self.a)

    def is_infinity(self) -> bool:
        return not self.b

    def value(self):
        """Affine coordinate a/b as a field element, or INF."""
        if self.is_infinity():
            return INF
        if isinstance(self.a, int):
            return Fraction(self.a, self.b)
        return RatFunc(self.a, self.b)

    def __str__(self):
        if self.is_infinity():
            return "inf"
        v = self.value()
        if isinstance(v, Fraction):
            return str(v)
        return v.to_str()


@dataclass(frozen=True)
class RationalMap:
    F: tuple
    G: tuple
    degree: int
    base: Base = field(default=QQ, compare=False)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def f(self) -> Poly:
        """F(x, 1) with ring coefficients."""
        return Poly(self.F)

    @property
    def g(self) -> Poly:
        return Poly(self.G)

    def eval_forms(self, a, b):
        """(F(a, b), G(a, b)) for ring or field elements a, b."""
        d = self.degree
        apow = [1]
        bpow = [1]
        for _ in range(d):
            apow.append(apow[-1] * a)
            bpow.append(bpow[-1] * b)
        fa = 0
        ga = 0
        for i in range(d + 1):
            m = apow[i] * bpow[d - i]
            if self.F[i]:
                fa = fa + self.F[i] * m
            if self.G[i]:
                ga = ga + self.G[i] * m
        return fa, ga

    def __call__(self, point: ProjPoint) -> ProjPoint:
        fa, ga = self.eval_forms(point.a, point.b)
        return ProjPoint.make(fa, ga, self.base)

    def field_value_at(self, v, field_of=None):
        """phi(v) for v in an extension field (QElt, Fraction, RatFunc) or INF."""
        d = self.degree
        conv = self.base.to_field
        if field_of is not None:
            conv = lambda c, _f=field_of, _b=self.base: _f(_b.to_field(c))  # noqa: E731
        if v is INF:
            if not self.G[d]:
                return INF
            return conv(self.F[d]) / conv(self.G[d])
        num = 0
        den = 0
        for i in range(d, -1, -1):
            num = num * v + conv(self.F[i])
            den = den * v + conv(self.G[i])
        if not den:
            return INF
        return num / den

    def to_str(self) -> str:
        f = self.base.field_poly(self.f)
        g = self.base.field_poly(self.g)
        if g.degree == 0:
            gc = g[0]
            return (f * (1 / self.base.to_field(gc))).to_str() if gc != 1 else f.to_str()
        return f"({f.to_str()})/({g.to_str()})"

    def __str__(self):
        return self.to_str()

    def cache_get(self, key, compute):
        # single writer per key; readers see either nothing or the final value
        cache = self._cache
        if key not in cache:
            with _CACHE_LOCK:
                if key not in cache:
                    cache[key] = compute()
        return cache[key]


_CACHE_LOCK = RLock()


def normalize_map(numerator: Poly, denominator: Poly, base: Base = QQ) -> RationalMap:
    """Canonical coprime homogeneous pair for numerator(x)/denominator(x)."""
    num = base.field_poly(numerator)
    den = base.field_poly(denominator)
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        raise DegreeError("degree: constant map has degree 0 < 2")
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num.exact_div(g)
        den = den.exact_div(g)
    d = max(num.degree, den.degree)
    if d < 2:
        raise DegreeError(f"degree: map has degree {d} < 2")
    fcoef = [num[i] for i in range(d + 1)]
    gcoef = [den[i] for i in range(d + 1)]
    ring = base.clear_denominators(fcoef + gcoef)
    lead = d + 1 + max(i for i in range(d + 1) if gcoef[i])
    ring = base.normalize_vector(ring, lead)
    return RationalMap(tuple(ring[: d + 1]), tuple(ring[d + 1 :]), d, base)


def iterate(phi: RationalMap, point: ProjPoint, k: int) -> ProjPoint:
    if k < 0:
        raise ValueError("k must be >= 0")
    for _ in range(k):
        point = phi(point)
    return point


def orbit(phi: RationalMap, point: ProjPoint, k: int) -> list[ProjPoint]:
    """[point, phi(point), ..., phi^k(point)]."""
    out = [point]
    for _ in range(k):
        out.append(phi(out[-1]))
    return out


def iterate_forms(phi: RationalMap, k: int) -> tuple[Poly, Poly]:
    """(F_k(x, 1), G_k(x, 1)) for phi^k, forms of degree d^k, content removed."""

    def compute():
        if k == 0:
            return Poly((phi.base.zero, phi.base.one)), Poly((phi.base.one,))
        fk, gk = iterate_forms(phi, k - 1)
        d = phi.degree
        fpow = [ONE]
        gpow = [ONE]
        for _ in range(d):
            fpow.append(fpow[-1] * fk)
            gpow.append(gpow[-1] * gk)
        nf = Poly()
        ng = Poly()
        for i in range(d + 1):
            m = fpow[i] * gpow[d - i]
            if phi.F[i]:
                nf = nf + _scale(m, phi.F[i])
            if phi.G[i]:
                ng = ng + _scale(m, phi.G[i])
        cont = phi.base.ring_gcd(list(nf.coeffs) + list(ng.coeffs))
        if cont != phi.base.one and cont != 1:
            if isinstance(cont, int):
                nf = Poly(c // cont for c in nf.coeffs)
                ng = Poly(c // cont for c in ng.coeffs)
            else:
                nf = Poly(c.exact_div(cont) for c in nf.coeffs)
                ng = Poly(c.exact_div(cont) for c in ng.coeffs)
        return nf, ng

    return phi.cache_get(("forms", k), compute)


def _scale(f: Poly, c) -> Poly:
    # c may itself be a Poly in t, which must act as a scalar here
    return Poly(a * c for a in f.coeffs)


def period_numerator(phi: RationalMap, k: int) -> Poly:
    """Numerator of phi^k(x) - x as a polynomial over the base field."""
    fk, gk = iterate_forms(phi, k)
    return phi.base.field_poly(fk - Poly.x() * gk)


def preimage_numerator(phi: RationalMap, k: int, value) -> Poly:
    """Numerator of phi^k(x) - value (value a field element); finite preimages only."""
    fk, gk = iterate_forms(phi, k)
    base = phi.base
    return base.field_poly(fk) - base.field_poly(gk) * base.to_field(value)


def homogeneous_resultant(phi: RationalMap):
    """Res(F, G) of the binary forms via the Sylvester determinant."""
    d = phi.degree
    fa = list(reversed(phi.F))
    ga = list(reversed(phi.G))
    zero = phi.base.zero
    rows = []
    for i in range(d):
        rows.append([zero] * i + fa + [zero] * (d - 1 - i))
    for i in range(d):
        rows.append([zero] * i + ga + [zero] * (d - 1 - i))
    if phi.base is QQ:
        return det_bareiss(rows)
    rf = [[phi.base.to_field(c) for c in r] for r in rows]
    return det_bareiss(rf).num


# -- critical data ---------------------------------------------------------------


def minimal_polynomial(elem: QElt, base: Base = QQ) -> Poly:
    """Minimal polynomial over the base of an element of a QuotField.

    The characteristic polynomial Res_y(w(y), x - rep(y)) is interpolated
    from deg(w) + 1 integer values of x, then made squarefree.
    """
    L = elem.field
    one = base.to_field(1)
    rep = elem.rep
    if rep.degree <= 0:
        c = rep[0] if rep else base.to_field(0)
        return Poly((-c, one))
    xs = [base.to_field(i) for i in range(L.degree + 1)]
    ys = [resultant(L.modulus, Poly((x0,)) - rep) for x0 in xs]
    return squarefree_part(interpolate(xs, ys))


def point_minpoly(pt, base: Base = QQ):
    """Minimal polynomial of a finite orbit point, or INF."""
    if pt is INF:
        return INF
    if isinstance(pt, ProjPoint):
        if pt.is_infinity():
            return INF
        return Poly((-pt.value(), base.to_field(1)))
    return minimal_polynomial(pt, base)


@dataclass
class CriticalClass:
    """One Galois class of critical points and its forward orbit.

    Orbits of rational critical points (and of infinity) are ProjPoints; for
    an irreducible class of degree > 1 they live in its QuotField, with INF
    for the point at infinity.
    """

    minpoly: object  # Poly, or INF for the point at infinity
    field: QuotField | None
    start: object
    orbit: list = field(default_factory=list)  # orbit[k-1] = phi^k(c)
    closed: bool = False
    preperiod: int | None = None
    period: int | None = None
    _seen: dict = field(default_factory=dict, repr=False)


class CriticalData:
    """Critical points of a map and lazily extended critical orbits."""

    def __init__(self, phi: RationalMap, W: Poly, infinity_is_critical: bool, classes: list[CriticalClass]):
        self.phi = phi
        self.W = W
        self.infinity_is_critical = infinity_is_critical
        self.classes = classes
        self._lock = Lock()

    def extend(self, k: int) -> None:
        """Make orbit entries 1..k available (closed orbits stop early)."""
        with self._lock:
            for cls in self.classes:
                while not cls.closed and len(cls.orbit) < k:
                    prev = cls.orbit[-1] if cls.orbit else cls.start
                    nxt = _step(self.phi, prev, cls.field)
                    key = _key(nxt)
                    idx = len(cls.orbit) + 1
                    if key in cls._seen:
                        cls.closed = True
                        cls.preperiod = cls._seen[key]
                        cls.period = idx - cls._seen[key]
                        break
                    cls._seen[key] = idx
                    cls.orbit.append(nxt)

    def orbit_point(self, cls: CriticalClass, k: int):
        """phi^k(c) for k >= 1, wrapping around a closed cycle."""
        self.extend(k)
        if k <= len(cls.orbit):
            return cls.orbit[k - 1]
        first, per = cls.preperiod, cls.period
        return cls.orbit[first - 1 + (k - first) % per]

    def all_closed(self) -> bool:
        return all(c.closed for c in self.classes)

    def orbit_poly(self, k: int) -> tuple[Poly, bool]:
        """Squarefree poly with roots phi^k(c) over finite critical c, plus an INF flag.

        Computed by elimination (minimal polynomials via resultants), not by
        evaluating orbit points against a query.
        """
        base = self.phi.base
        out = _one(base)
        inf = False
        for cls in self.classes:
            mp = point_minpoly(self.orbit_point(cls, k), base)
            if mp is INF:
                inf = True
            else:
                out = poly_lcm(out, mp)
        return out, inf


def _one(base: Base) -> Poly:
    return Poly((base.to_field(1),)) if base is QQt else ONE


def _key(pt):
    if pt is INF:
        return ("inf",)
    if isinstance(pt, ProjPoint):
        return ("pt", pt)
    return ("q", pt.rep)


def _step(phi: RationalMap, pt, L: QuotField | None):
    if isinstance(pt, ProjPoint):
        return phi(pt)
    return phi.field_value_at(pt, L)


def affine_wronskian(phi: RationalMap) -> Poly:
    """Numerator of phi'(x): f'g - fg'."""
    f = phi.base.field_poly(phi.f)
    g = phi.base.field_poly(phi.g)
    return f.deriv() * g - f * g.deriv()


def critical_locus(phi: RationalMap) -> CriticalData:
    def compute():
        base = phi.base
        w = affine_wronskian(phi)
        inf_crit = w.degree < 2 * phi.degree - 2
        W = squarefree_part(w) if w.degree > 0 else _one(base)
        classes = []
        if W.degree > 0:
            for q, _ in base.factor(W):
                if q.degree == 1:
                    root = -q[0] / q[1]
                    classes.append(CriticalClass(q, None, ProjPoint.from_value(root, base)))
                else:
                    L = QuotField(q, check=False)
                    classes.append(CriticalClass(q, L, L.gen))
        if inf_crit:
            classes.append(CriticalClass(INF, None, ProjPoint.infinity(base)))
        return CriticalData(phi, W, inf_crit, classes)

    return phi.cache_get(("critical",), compute)


def orbit_poly(phi: RationalMap, k: int) -> tuple[Poly, bool]:
    if k < 1:
        raise ValueError("k must be >= 1")
    return critical_locus(phi).orbit_poly(k)


def critical_value_poly(phi: RationalMap, k: int, cap: int = DEFAULT_CRITICAL_VALUE_CAP) -> tuple[Poly, bool]:
    """Finite critical values of phi^k as a squarefree poly, plus an INF flag.

    Critical points of phi^k are the j-fold preimages (j < k) of critical
    points of phi, so their images are the first k critical-orbit layers.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > cap:
        raise CapError("critical_value_k", k, cap)
    crit = critical_locus(phi)
    out = _one(phi.base)
    inf = False
    for j in range(1, k + 1):
        p, flag = crit.orbit_poly(j)
        out = poly_lcm(out, p)
        inf = inf or flag
    return out, inf


def bad_primes(phi: RationalMap) -> list:
    """Places of bad reduction: primes (Q) or monic irreducibles / 'inf' (Q(t))."""
    res = homogeneous_resultant(phi)
    if phi.base is QQ:
        return sorted(factorint(abs(res)).keys())
    from .base_rings import factor_rational_poly

    out: list = [q for q, _ in factor_rational_poly(res)[1]] if res.degree > 0 else []
    D = max(max((c.degree for c in phi.F if c), default=0), max((c.degree for c in phi.G if c), default=0))
    if res.degree != 2 * phi.degree * D:
        out.append("inf")
    return out


def mobius(n: int) -> int:
    fac = factorint(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def dynatomic(phi: RationalMap, n: int, cap: int = DEFAULT_DYNATOMIC_CAP) -> Poly:
    """Monic Phi*_n = prod_{k | n} (numerator of phi^k(x) - x)^mu(n/k)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise CapError("dynatomic_n", n, cap)
    num = ONE
    den = ONE
    for k in divisors(n):
        mu = mobius(n // k)
        if mu == 1:
            num = num * period_numerator(phi, k)
        elif mu == -1:
            den = den * period_numerator(phi, k)
    q, r = divmod(num, den)
    if not r.is_zero():
        raise ArithmeticError("internal error: non-exact dynatomic division")
    return q.monic()


def primitive_int_poly(f: Poly) -> list[int]:
    return content_and_primitive(f)[1]


__all__ = [
    "INF",
    "CapError",
    "CriticalData",
    "DegreeError",
    "FactorCapError",
    "ProjPoint",
    "RationalMap",
    "bad_primes",
    "critical_locus",
    "critical_value_poly",
    "dynatomic",
    "homogeneous_resultant",
    "iterate",
    "iterate_forms",
    "minimal_polynomial",
    "normalize_map",
    "orbit",
    "orbit_poly",
    "period_numerator",
    "preimage_numerator",
]
