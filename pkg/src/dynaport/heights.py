"""Weil and canonical heights, gap constants and root height bounds.

Over Q the height of [a:b] in primitive integer coordinates is
log max(|a|, |b|).  Over Q(t) a monic irreducible pi counts with weight
deg(pi) and infinity with weight 1, so h([a:b]) = max(deg a, deg b) for
coprime a, b in Q[t].

Gap constants use l1 norms: for every algebraic P,

    d*h(P) - C_low <= h(phi(P)) <= d*h(P) + C_up

with C_up = log max(|F|_1, |G|_1) and C_low = log max_i(|A_i|_1 + |B_i|_1),
where A_1 F + B_1 G = R X^(2d-1) and A_2 F + B_2 G = R Z^(2d-1) are the
Nullstellensatz identities read off the Sylvester system.  Over Q(t) the
logs become t-degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from sympy import factorint

from .base_rings import QQ, QQt, Poly, content_and_primitive, squarefree_part
from .base_rings.poly import det_bareiss, solve_linear
from .dynamics import ProjPoint, RationalMap

DEFAULT_BIT_CAP = 1 << 28
DEFAULT_FF_DEGREE_CAP = 1024
_LOG2 = math.log(2)


class PrecisionError(ArithmeticError):
    """Iterates outgrew the configured cap; ``partial`` is the last estimate."""

    def __init__(self, message: str, partial: "HeightEstimate"):
        super().__init__(f"precision: {message}")
        self.partial = partial


@dataclass(frozen=True)
class HeightEstimate:
    value: float
    error_bound: float
    iterations: int = 0


@dataclass(frozen=True)
class GapConstant:
    C_map: float
    C_up: float
    C_low: float


def log_int(n) -> float:
    """log|n| for an arbitrarily large nonzero integer (int or mpz)."""
    n = abs(n)
    bl = n.bit_length()
    if bl <= 1000:
        return math.log(int(n))
    shift = bl - 64
    return math.log(int(n >> shift)) + shift * _LOG2


def weil_height(point: ProjPoint) -> float:
    if point.base is QQt:
        return float(max(point.a.degree, point.b.degree, 0))
    m = max(abs(point.a), abs(point.b))
    return log_int(m)


def height_of_value(v, base=QQ) -> float:
    return weil_height(ProjPoint.from_value(v, base))


# -- gap constant -----------------------------------------------------------------


def _form_mul_matrix(phi: RationalMap) -> list[list]:
    # columns: A_0..A_{d-1}, B_0..B_{d-1}; rows: coefficient of X^k Z^(2d-1-k)
    d = phi.degree
    zero = phi.base.zero
    rows = [[zero] * (2 * d) for _ in range(2 * d)]
    for j in range(d):
        for i in range(d + 1):
            rows[i + j][j] = phi.F[i]
            rows[i + j][d + j] = phi.G[i]
    return rows


def nullstellensatz_cofactors(phi: RationalMap):
    """(R, [(A_1, B_1), (A_2, B_2)]) with ring coefficients.

    A_i, B_i are coefficient lists of forms of degree d-1; A_1 F + B_1 G =
    R X^(2d-1) and A_2 F + B_2 G = R Z^(2d-1), R the Sylvester determinant.
    """

    def compute():
        d = phi.degree
        base = phi.base
        rows = _form_mul_matrix(phi)
        if base is QQt:
            rows = [[base.to_field(c) for c in r] for r in rows]
        R = det_bareiss(rows)
        out = []
        for target in (2 * d - 1, 0):
            rhs = [base.to_field(0)] * (2 * d)
            rhs[target] = base.to_field(1)
            sol = solve_linear(rows, rhs)
            vec = [s * R for s in sol]
            if base is QQ:
                assert all(Fraction(v).denominator == 1 for v in vec)
                vec = [int(v) for v in vec]
            else:
                assert all(v.is_poly() for v in vec)
                vec = [v.num for v in vec]
            out.append((vec[:d], vec[d:]))
        if base is QQt:
            R = R.num
        return R, out

    return phi.cache_get(("nullstellensatz",), compute)


def height_gap_constant(phi: RationalMap) -> GapConstant:
    def compute():
        _, cof = nullstellensatz_cofactors(phi)
        if phi.base is QQt:
            deg = lambda c: c.degree if c else 0  # noqa: E731
            c_up = float(max(deg(c) for c in phi.F + phi.G))
            c_low = float(max(deg(c) for A, B in cof for c in A + B))
        else:
            l1 = lambda v: sum(abs(c) for c in v)  # noqa: E731
            c_up = math.log(max(l1(phi.F), l1(phi.G)))
            c_low = math.log(max(l1(A) + l1(B) for A, B in cof))
        return GapConstant(max(c_up, c_low, 0.0), c_up, c_low)

    return phi.cache_get(("gap",), compute)


def escape_threshold(phi: RationalMap) -> float:
    """Above this height every orbit is strictly increasing in height."""
    return height_gap_constant(phi).C_map / (phi.degree - 1)


# -- canonical height -------------------------------------------------------------


def _iterations_needed(C: float, d: int, tol: float) -> int:
    if C <= 0:
        return 0
    return max(0, math.ceil(math.log(C / ((d - 1) * tol), d)))


def _exact_step(F, G, R, a, b, d):
    bp = [gmpy2.mpz(1)]
    for _ in range(d):
        bp.append(bp[-1] * b)
    fa, ga = F[d], G[d]
    for i in range(d - 1, -1, -1):
        fa = fa * a + F[i] * bp[d - i]
        ga = ga * a + G[i] * bp[d - i]
    if R != 1:
        g = gmpy2.gcd(gmpy2.gcd(R, fa % R), ga % R)
        if g != 1:
            fa, ga = fa // g, ga // g
    return fa, ga


def _float_tail(F, G, R, a, b, d: int, steps: int, prec: int) -> gmpy2.mpfr:
    """log max(|a_N|, |b_N|) after ``steps`` more iterations, in mpfr.

    The direction [a:b] is carried as a unit-max-norm float pair and the log
    scale separately.  The gcd removed at each step divides R, so it is read
    off residues of a, b modulo a shrinking power of R.
    """
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        M = R ** (steps + 1) if R != 1 else gmpy2.mpz(1)
        ra, rb = a % M, b % M
        s = max(abs(a), abs(b))
        L = gmpy2.log(gmpy2.mpfr(s))
        x, y = gmpy2.mpfr(a) / gmpy2.mpfr(s), gmpy2.mpfr(b) / gmpy2.mpfr(s)
        Ff = [gmpy2.mpfr(c) for c in F]
        Gf = [gmpy2.mpfr(c) for c in G]
        for _ in range(steps):
            g = 1
            if R != 1:
                fa, ga = _exact_step(F, G, gmpy2.mpz(1), ra, rb, d)
                g = gmpy2.gcd(gmpy2.gcd(R, fa % R), ga % R)
                M //= R
                ra, rb = (fa // g) % M, (ga // g) % M
            yp = [gmpy2.mpfr(1)]
            for _ in range(d):
                yp.append(yp[-1] * y)
            fx, gx = Ff[d], Gf[d]
            for i in range(d - 1, -1, -1):
                fx = fx * x + Ff[i] * yp[d - i]
                gx = gx * x + Gf[i] * yp[d - i]
            m = max(abs(fx), abs(gx))
            L = d * L + gmpy2.log(m) - gmpy2.log(gmpy2.mpfr(g))
            x, y = fx / m, gx / m
        return L


_SWITCH_BITS = 1 << 16


def canonical_height(
    phi: RationalMap,
    point: ProjPoint,
    tol: float = 1e-8,
    bit_cap: int = DEFAULT_BIT_CAP,
    exact_only: bool = False,
) -> HeightEstimate:
    """h(phi^N(P)) / d^N with C/(d^N (d-1)) <= tol.

    Iterates are exact integers until they reach a few thousand digits; the
    remaining steps run in mpfr on the normalized direction (unless
    ``exact_only``), with the float error estimated from a second run at
    double precision and added to ``error_bound``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = phi.degree
    C = height_gap_constant(phi).C_map
    N = _iterations_needed(C, d, tol)
    if phi.base is QQt:
        return _canonical_height_ff(phi, point, N, C)
    R, _ = nullstellensatz_cofactors(phi)
    R = gmpy2.mpz(abs(R))
    F = [gmpy2.mpz(c) for c in phi.F]
    G = [gmpy2.mpz(c) for c in phi.G]
    a, b = gmpy2.mpz(point.a), gmpy2.mpz(point.b)
    tail = C / (d**N * (d - 1)) if C > 0 else 0.0
    cap = bit_cap if exact_only else min(bit_cap, _SWITCH_BITS)
    for k in range(N):
        if max(a.bit_length(), b.bit_length()) * d > cap:
            if exact_only or not (a or b):
                h = log_int(max(abs(a), abs(b))) if (a or b) else 0.0
                partial = HeightEstimate(h / d**k, C / (d**k * (d - 1)), k)
                raise PrecisionError(f"iterate {k + 1} would exceed bit_cap={bit_cap}", partial)
            prec = 128 + 8 * (N - k)
            lo = _float_tail(F, G, R, a, b, d, N - k, prec)
            hi = _float_tail(F, G, R, a, b, d, N - k, 2 * prec)
            fl_err = float(abs(hi - lo)) * 2 / d**N + 2.0**-prec
            return HeightEstimate(float(hi / gmpy2.mpfr(d) ** N), tail + fl_err, N)
        a, b = _exact_step(F, G, R, a, b, d)
    h = log_int(max(abs(a), abs(b)))
    return HeightEstimate(h / d**N, tail, N)


def _canonical_height_ff(phi: RationalMap, point: ProjPoint, N: int, C: float) -> HeightEstimate:
    d = phi.degree
    for k in range(N):
        h = weil_height(point)
        if h * d > DEFAULT_FF_DEGREE_CAP:
            partial = HeightEstimate(h / d**k, C / (d**k * (d - 1)), k)
            raise PrecisionError(f"iterate {k + 1} would exceed degree cap {DEFAULT_FF_DEGREE_CAP}", partial)
        point = phi(point)
    return HeightEstimate(weil_height(point) / d**N, C / (d**N * (d - 1)) if C > 0 else 0.0, N)


# -- heights of algebraic points ---------------------------------------------------


def root_height_bounds(f: Poly) -> tuple[float, float]:
    """Interval containing h(alpha) for every root alpha of irreducible f over Q.

    Mahler's comparison gives |f|_inf / binom(n, n//2) <= M(f) <= |f|_2 and
    h(alpha) = log M(f) / n for primitive integer f.
    """
    _, v = content_and_primitive(f)
    n = len(v) - 1
    if n < 1:
        raise ValueError("root_height_bounds needs degree >= 1")
    norm_inf = max(abs(c) for c in v)
    norm2_sq = sum(c * c for c in v)
    lo = (log_int(norm_inf) - math.log(math.comb(n, n // 2))) / n
    hi = 0.5 * log_int(norm2_sq) / n
    return max(lo, 0.0), hi


def ff_root_height(f: Poly) -> float:
    """Exact h(beta) for a root of an irreducible f in x over Q(t)."""
    coeffs = QQt.clear_denominators(list(f.coeffs))
    g = QQt.ring_gcd(coeffs)
    if g.degree > 0:
        coeffs = [c.exact_div(g) for c in coeffs]
    return max(c.degree for c in coeffs if c) / f.degree


def minpoly_height_bounds(f: Poly, base=QQ) -> tuple[float, float]:
    if base is QQt:
        h = ff_root_height(f)
        return h, h
    return root_height_bounds(f)


# -- orbit behaviour ---------------------------------------------------------------


@dataclass(frozen=True)
class OrbitBehavior:
    """Outcome of walking an orbit: preperiodic (m, n) or wandering from index k."""

    preperiodic: bool
    preperiod: int | None = None
    period: int | None = None
    escape_index: int | None = None


def orbit_behavior(phi: RationalMap, point: ProjPoint, max_steps: int = 10_000) -> OrbitBehavior:
    """Decide preperiodicity exactly: a repeat, or height above the escape threshold."""
    thr = escape_threshold(phi)
    seen = {point: 0}
    cur = point
    for k in range(max_steps + 1):
        if weil_height(cur) > thr + 1e-9:
            return OrbitBehavior(False, escape_index=k)
        nxt = phi(cur)
        if nxt in seen:
            m = seen[nxt]
            return OrbitBehavior(True, preperiod=m, period=k + 1 - m)
        seen[nxt] = k + 1
        cur = nxt
    raise RuntimeError(f"orbit undecided after {max_steps} steps")


def is_preperiodic(phi: RationalMap, point: ProjPoint) -> bool:
    return orbit_behavior(phi, point).preperiodic


def infinity_in_orbit(phi: RationalMap, point: ProjPoint) -> int | None:
    """Smallest k with phi^k(point) = infinity, or None (decided exactly)."""
    beh = orbit_behavior(phi, point)
    last = beh.preperiod + beh.period if beh.preperiodic else beh.escape_index
    cur = point
    for k in range(last + 1):
        if cur.is_infinity():
            return k
        cur = phi(cur)
    # past the escape index heights strictly increase, and h(inf) = 0
    return None


# -- common reductions versus heights ------------------------------------------


def common_places_weight(x: ProjPoint, y: ProjPoint) -> float:
    """Sum over places where x and y reduce to the same point of log N(place)."""
    if x == y:
        raise ValueError("x and y must differ")
    if x.base is QQt:
        cross = x.a * y.b - x.b * y.a
        total = squarefree_part(cross).degree
        ex, ey = max(x.a.degree, x.b.degree), max(y.a.degree, y.b.degree)
        if cross.degree < ex + ey:
            total += 1
        return float(total)
    cross = x.a * y.b - x.b * y.a
    return sum(math.log(p) for p in factorint(abs(cross)))


def common_reduction_bound(x: ProjPoint, y: ProjPoint) -> tuple[float, float]:
    """(lhs, rhs) with lhs = sum_{E} log N and rhs = min(h)+h(x)+h(y)+c_K."""
    hx, hy = weil_height(x), weil_height(y)
    c_k = 0.0 if x.base is QQt else _LOG2
    return common_places_weight(x, y), min(hx, hy) + hx + hy + c_k


__all__ = [
    "GapConstant",
    "HeightEstimate",
    "OrbitBehavior",
    "PrecisionError",
    "canonical_height",
    "common_places_weight",
    "escape_threshold",
    "ff_root_height",
    "height_gap_constant",
    "common_reduction_bound",
    "infinity_in_orbit",
    "is_preperiodic",
    "minpoly_height_bounds",
    "nullstellensatz_cofactors",
    "orbit_behavior",
    "root_height_bounds",
    "weil_height",
]
