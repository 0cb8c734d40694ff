"""Places of Q(t), valuations, multiplicity profiles and witness places.

A finite place is a monic irreducible pi in Q[t]; over an algebraic closure
it stands for deg(pi) conjugate places, so it carries weight deg(pi).  The
place at infinity has weight 1.  Residue arithmetic happens exactly in
Q[t]/(pi).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import nextprime

from .base_rings import (
    DEFAULT_FACTOR_CAP,
    QQ,
    QQt,
    Poly,
    QuotField,
    RatFunc,
    content_and_primitive,
    factor_rational_poly,
    is_irreducible,
    is_squarefree,
    squarefree_decompose,
    squarefree_part,
)
from .base_rings.factor import _edf, _trim, pm_gcd, pm_monic, pm_powmod, pm_sub
from .dynamics import ProjPoint, RationalMap, homogeneous_resultant, iterate, normalize_map
from .heights import infinity_in_orbit, orbit_behavior
from .portraits import AtInfinityError, BadReductionError, Portrait, PreperiodicPointError, _portrait_matches

DEFAULT_STEP_CAP = 64
RESIDUE_BIT_CAP = 1 << 14  # stop a residue-field walk once coordinates get this large
DEFAULT_DEGREE_CAP = 4096


class InfiniteValuation(ArithmeticError):
    """ord of zero."""


@dataclass(frozen=True)
class FFPlace:
    pi: Poly | None  # None for the place at infinity

    @classmethod
    def finite(cls, pi: Poly, check: bool = True) -> "FFPlace":
        pi = Poly(Fraction(c) for c in pi.coeffs)
        if pi.degree < 1:
            raise ValueError("a finite place needs deg(pi) >= 1")
        if pi.lc != 1:
            raise ValueError(f"{pi.to_str('t')} is not monic")
        if check and not is_irreducible(pi, cap=max(DEFAULT_FACTOR_CAP, pi.degree)):
            raise ValueError(f"{pi.to_str('t')} is not irreducible over Q")
        return cls(pi)

    @classmethod
    def infinity(cls) -> "FFPlace":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.pi is None

    @property
    def weight(self) -> int:
        return 1 if self.pi is None else self.pi.degree

    def sort_key(self):
        if self.pi is None:
            return (float("inf"), ())
        return (self.pi.degree, tuple(Fraction(c) for c in self.pi.coeffs))

    def __str__(self):
        return "inf" if self.pi is None else self.pi.to_str("t")


def _as_ratfunc(f) -> RatFunc:
    if isinstance(f, RatFunc):
        return f
    return QQt.to_field(f)


def _ord_poly(f: Poly, pi: Poly) -> int:
    k = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return k
        f = q
        k += 1


def ff_ord(f, place: FFPlace) -> int:
    """ord at a place of an element of Q(t) (RatFunc, Poly in t, or rational)."""
    f = _as_ratfunc(f)
    if not f:
        raise InfiniteValuation("ord of 0 is infinite")
    if place.is_infinity:
        return f.den.degree - f.num.degree
    return _ord_poly(f.num, place.pi) - _ord_poly(f.den, place.pi)


# -- multiplicity profiles ---------------------------------------------------------


@dataclass
class MultiplicityProfile:
    """Factored (or partly factored) f = c * prod entry^mult."""

    entries: list[tuple[FFPlace | Poly, int]]
    complete: bool

    def places(self, multiplicity: int | None = None) -> list[FFPlace]:
        return [e for e, k in self.entries if isinstance(e, FFPlace) and (multiplicity is None or k == multiplicity)]

    def blocks(self) -> list[tuple[Poly, int]]:
        return [(e, k) for e, k in self.entries if isinstance(e, Poly)]

    def reconstruct(self) -> Poly:
        out = Poly((1,))
        for e, k in self.entries:
            out = out * (e.pi if isinstance(e, FFPlace) else e) ** k
        return out


def _int_eval_homog(f: list[int], u: int, v: int) -> int:
    # v^n f(u/v)
    n = len(f) - 1
    acc = f[n]
    vp = 1
    for i in range(n - 1, -1, -1):
        vp *= v
        acc = acc * u + f[i] * vp
    return acc


def _rational_roots(f: list[int]) -> list[Fraction]:
    """Rational roots of a squarefree integer polynomial of any degree.

    Roots modulo a prime p of good reduction are Hensel-lifted past
    2 |lc| |f(0)|, which bounds lc * r for every rational root r.
    """
    f = _trim(list(f))
    if not is_squarefree(Poly(Fraction(c) for c in f)):
        raise ValueError("_rational_roots needs a squarefree polynomial")
    roots = []
    if f[0] == 0:
        roots.append(Fraction(0))
        f = f[1:]
    if len(f) <= 1:
        return roots
    lc, a0 = f[-1], f[0]
    df = [i * c for i, c in enumerate(f)][1:]
    p = 2
    while True:
        p = int(nextprime(p))
        if lc % p and len(pm_gcd([c % p for c in f], [c % p for c in df], p)) == 1:
            break
    fp = pm_monic(_trim([c % p for c in f]), p)
    g = pm_gcd(fp, pm_sub(pm_powmod([0, 1], p, fp, p), [0, 1], p), p)
    if len(g) <= 1:
        return roots
    linear = _edf(g, 1, p, random.Random(p))
    bound = 2 * abs(lc) * abs(a0)
    for lin in linear:
        rho = -lin[0] % p
        M = p
        while M <= bound:
            M = M * M
            fv = sum(c * pow(rho, i, M) for i, c in enumerate(f)) % M
            dv = sum(c * pow(rho, i, M) for i, c in enumerate(df)) % M
            rho = (rho - fv * pow(dv, -1, M)) % M
        w = lc * rho % M
        if w > M // 2:
            w -= M
        r = Fraction(w, lc)
        if _int_eval_homog(f, r.numerator, r.denominator) == 0:
            roots.append(r)
    return sorted(roots)


def ff_squarefree_profile(f: Poly, cap: int = DEFAULT_FACTOR_CAP) -> MultiplicityProfile:
    """Yun decomposition of f in Q[t], each block factored when within cap.

    A block above the cap contributes its rational roots as degree-1 places
    and the cofactor as an unfactored block; the profile is then incomplete.
    """
    f = Poly(Fraction(c) for c in _as_ratfunc(f).num.coeffs) if not isinstance(f, Poly) else f
    if f.is_zero():
        raise ValueError("profile of the zero polynomial")
    entries: list[tuple[FFPlace | Poly, int]] = []
    complete = True
    for block, k in squarefree_decompose(f):
        if block.degree <= cap:
            for q, _ in factor_rational_poly(block, cap)[1]:
                entries.append((FFPlace(q), k))
            continue
        complete = False
        _, prim = content_and_primitive(block)
        rest = block
        for r in _rational_roots(prim):
            lin = Poly((-r, 1))
            entries.append((FFPlace(lin), k))
            rest = rest.exact_div(lin)
        if rest.degree > 0:
            entries.append((rest.monic(), k))
    entries.sort(key=lambda e: (e[1], 0 if isinstance(e[0], FFPlace) else 1, _entry_key(e[0])))
    return MultiplicityProfile(entries, complete)


def _entry_key(e):
    if isinstance(e, FFPlace):
        return e.sort_key()
    return (e.degree, tuple(Fraction(c) for c in e.coeffs))


def distinct_factor_count(g: Poly) -> int:
    """sum of deg(pi) over distinct irreducible factors = number of distinct roots."""
    if g.is_zero():
        raise ValueError("distinct_factor_count of 0")
    return squarefree_part(g).degree if g.degree > 0 else 0


# -- reduction at a place ----------------------------------------------------------


def _ring_poly(c) -> Poly:
    return c if isinstance(c, Poly) else Poly((c,))


def is_good_place(phi: RationalMap, place: FFPlace) -> bool:
    if place.is_infinity:
        raise ValueError("the place at infinity is never used for reduction")
    R = phi.cache_get(("res",), lambda: homogeneous_resultant(phi))
    return not (_ring_poly(R) % place.pi).is_zero()


def _reduce_pair(k: QuotField, a: Poly, b: Poly):
    # [a:b] with coprime a, b in Q[t]; returns an element of k or None for infinity
    bb = k(b)
    if not bb:
        return None
    return k(a) / bb


@dataclass(frozen=True)
class PlaceOrbit:
    """Orbit of the reduced point: portrait, or None with how that was decided."""

    portrait: Portrait | None
    escape_certified: bool
    steps: int


def ff_place_orbit(
    phi: RationalMap, alpha: ProjPoint, place: FFPlace, step_cap: int = DEFAULT_STEP_CAP
) -> PlaceOrbit:
    if phi.base is not QQt:
        raise ValueError("ff_place_orbit needs a map over Q(t)")
    if not is_good_place(phi, place):
        raise BadReductionError(f"bad reduction at {place}")
    pi = place.pi
    if pi.degree == 1:
        # residue field Q: decide exactly with heights on the reduced map
        c = -Fraction(pi[0])
        num = Poly(_ring_poly(a)(c) for a in phi.F)
        den = Poly(_ring_poly(b)(c) for b in phi.G)
        red = normalize_map(num, den, QQ)
        a0, b0 = _ring_poly(alpha.a)(c), _ring_poly(alpha.b)(c)
        pt = ProjPoint.infinity(QQ) if b0 == 0 else ProjPoint.from_value(Fraction(a0) / Fraction(b0), QQ)
        beh = orbit_behavior(red, pt, max_steps=max(step_cap, 10_000))
        if beh.preperiodic:
            return PlaceOrbit(Portrait(beh.preperiod, beh.period), False, beh.preperiod + beh.period)
        return PlaceOrbit(None, True, beh.escape_index)
    k = QuotField(pi, check=False)
    F = [k(_ring_poly(a)) for a in phi.F]
    G = [k(_ring_poly(b)) for b in phi.G]

    def step(x):
        a, b = (k.one, k.zero) if x is None else (x, k.one)
        fa, ga = k.zero, k.zero
        for i in range(len(F)):
            mono = a**i * b ** (len(F) - 1 - i)
            fa = fa + F[i] * mono
            ga = ga + G[i] * mono
        return None if not ga else fa / ga

    x = _reduce_pair(k, _ring_poly(alpha.a), _ring_poly(alpha.b))
    seen = {}
    for j in range(step_cap + 1):
        key = None if x is None else x.rep
        if key in seen:
            m = seen[key]
            return PlaceOrbit(Portrait(m, j - m), False, j)
        if key is not None and _rep_bits(key) > RESIDUE_BIT_CAP:
            # a repeat would need an earlier iterate of this size; give up uncertified
            return PlaceOrbit(None, False, j)
        seen[key] = j
        x = step(x)
    return PlaceOrbit(None, False, step_cap)


def _rep_bits(rep: Poly) -> int:
    return max((max(Fraction(c).numerator.bit_length(), Fraction(c).denominator.bit_length()) for c in rep.coeffs), default=0)


def ff_portrait_at_place(
    phi: RationalMap, alpha: ProjPoint, place: FFPlace, step_cap: int = DEFAULT_STEP_CAP
) -> Portrait | None:
    return ff_place_orbit(phi, alpha, place, step_cap).portrait


# -- witness places ----------------------------------------------------------------


@dataclass(frozen=True)
class FFWitness:
    place: FFPlace
    valuation: int
    portrait: Portrait
    verification: dict = field(compare=False, default_factory=dict)


@dataclass
class FFWitnessSearch:
    witnesses: list[FFWitness]
    complete: bool
    reason: str | None = None
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.witnesses)

    def __len__(self):
        return len(self.witnesses)


def _difference_numerator(x: ProjPoint, y: ProjPoint) -> Poly:
    return _ring_poly(y.a) * _ring_poly(x.b) - _ring_poly(x.a) * _ring_poly(y.b)


def verify_ff_witness(phi: RationalMap, alpha: ProjPoint, m: int, n: int, place: FFPlace) -> dict:
    """Re-check by iterating globally first and reducing afterwards."""
    pts = [alpha]
    for _ in range(m + n):
        pts.append(phi(pts[-1]))
    x, y = pts[m].value(), pts[m + n].value()
    ordv = ff_ord(_as_ratfunc(y) - _as_ratfunc(x), place)
    k = QuotField(place.pi, check=False)
    xs = []
    for p in pts:
        r = _reduce_pair(k, _ring_poly(p.a), _ring_poly(p.b))
        xs.append("inf" if r is None else r.rep)
    walk = _portrait_matches(xs, m, n)
    return {"method": "iterate_then_reduce", "ord": ordv, "portrait_match": walk, "passed": walk and ordv == 1}


def ff_search_witnesses(
    phi: RationalMap,
    alpha: ProjPoint,
    m: int,
    n: int,
    factor_cap: int = DEFAULT_FACTOR_CAP,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    step_cap: int = DEFAULT_STEP_CAP,
) -> FFWitnessSearch:
    """Finite places where alpha has squarefree portrait (m, n)."""
    if phi.base is not QQt:
        raise ValueError("ff_search_witnesses needs a map over Q(t)")
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    if orbit_behavior(phi, alpha).preperiodic:
        raise PreperiodicPointError(f"alpha={alpha} is preperiodic")
    kinf = infinity_in_orbit(phi, alpha)
    if kinf is not None and kinf in (m, m + n):
        raise AtInfinityError(f"at-infinity: phi^{kinf}(alpha) is infinity")
    est = max(_ring_poly(alpha.a).degree, _ring_poly(alpha.b).degree, 1) * phi.degree ** (m + n)
    if est > degree_cap:
        from .dynamics import CapError

        raise CapError("degree_cap", est, degree_cap)
    x = iterate(phi, alpha, m)
    y = iterate(phi, x, n)
    g = _difference_numerator(x, y)
    prof = ff_squarefree_profile(g, factor_cap)
    cands = prof.places(1)
    reason = None
    if not cands and not any(k == 1 for _, k in prof.blocks()):
        reason = "no multiplicity-1 factor in the difference"
    witnesses, skipped = [], []
    for place in sorted(cands, key=FFPlace.sort_key):
        if not is_good_place(phi, place):
            skipped.append((str(place), "bad reduction"))
            continue
        if ff_ord(_ring_poly(x.b), place) > 0 or ff_ord(_ring_poly(y.b), place) > 0:
            skipped.append((str(place), "endpoint reduces to infinity"))
            continue
        orb = ff_place_orbit(phi, alpha, place, step_cap)
        if orb.portrait != Portrait(m, n):
            continue
        ver = verify_ff_witness(phi, alpha, m, n, place)
        if not ver["passed"]:
            raise ArithmeticError(f"internal error: witness {place} failed re-verification")
        witnesses.append(FFWitness(place, 1, orb.portrait, ver))
    return FFWitnessSearch(witnesses, prof.complete, reason, skipped)


# -- Gleason polynomials -----------------------------------------------------------


def gleason_polys(n_max: int) -> list[Poly]:
    """g_n = phi^n(0) for phi = x^2 + t, as polynomials in t."""
    out = []
    g = Poly()
    for _ in range(n_max):
        g = g * g + Poly((0, 1))
        out.append(g)
    return out


def gleason_check(n_max: int) -> list[tuple[int, bool]]:
    return [(n, is_squarefree(g)) for n, g in enumerate(gleason_polys(n_max), start=1)]


__all__ = [
    "FFPlace",
    "FFWitness",
    "FFWitnessSearch",
    "InfiniteValuation",
    "MultiplicityProfile",
    "PlaceOrbit",
    "distinct_factor_count",
    "ff_ord",
    "ff_place_orbit",
    "ff_portrait_at_place",
    "ff_search_witnesses",
    "ff_squarefree_profile",
    "gleason_check",
    "gleason_polys",
    "is_good_place",
    "verify_ff_witness",
]
