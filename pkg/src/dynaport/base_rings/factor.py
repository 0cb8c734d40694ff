"""Factorization over Q: modular factoring, Hensel lifting, recombination.

Polynomials modulo an integer are plain ascending lists of ints.  Only the
public :func:`factor_rational_poly` deals in :class:`Poly`.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import isqrt

from sympy import nextprime

from .poly import Poly, content_and_primitive, squarefree_decompose

DEFAULT_FACTOR_CAP = 64


class FactorCapError(ValueError):
    """Raised when a polynomial exceeds the configured factorization degree cap."""

    def __init__(self, degree: int, cap: int):
        super().__init__(f"cap exceeded: factor degree {degree} > factor_cap {cap}")
        self.degree = degree
        self.cap = cap


# -- arithmetic modulo m ---------------------------------------------------------


def _trim(v: list[int]) -> list[int]:
    while v and not v[-1]:
        v.pop()
    return v


def pm_mul(a: list[int], b: list[int], m: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % m for c in out])


def pm_sub(a: list[int], b: list[int], m: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def pm_add(a: list[int], b: list[int], m: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def pm_divmod(a: list[int], b: list[int], m: int) -> tuple[list[int], list[int]]:
    """Division modulo m; lc(b) must be invertible mod m."""
    r = [c % m for c in a]
    _trim(r)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("division by zero polynomial")
    inv = pow(b[-1], -1, m)
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    low = b[:-1]
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] % m
        if not c:
            continue
        c = c * inv % m
        off = k - db
        q[off] = c
        for j, bj in enumerate(low):
            r[off + j] -= c * bj
    return _trim(q), _trim([c % m for c in r[:db]])


def pm_rem(a: list[int], b: list[int], m: int) -> list[int]:
    return pm_divmod(a, b, m)[1]


def pm_monic(a: list[int], p: int) -> list[int]:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def pm_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, pm_rem(a, b, p)
    return pm_monic(a, p)


def pm_xgcd(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int], list[int]]:
    """(g, s, t) with s*a + t*b = g monic, modulo a prime p."""
    r0, r1 = _trim([c % p for c in a]), _trim([c % p for c in b])
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pm_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, pm_sub(s0, pm_mul(q, s1, p), p)
        t0, t1 = t1, pm_sub(t0, pm_mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0]


def pm_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = pm_rem(base, mod, p)
    while e:
        if e & 1:
            result = pm_rem(pm_mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = pm_rem(pm_mul(base, base, p), mod, p)
    return result


def pm_deriv(a: list[int], p: int) -> list[int]:
    return _trim([i * c % p for i, c in enumerate(a)][1:])


def _ddf(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Distinct-degree factorization of a monic squarefree f mod p."""
    out = []
    h = [0, 1]
    i = 0
    f = list(f)
    while len(f) - 1 >= 2 * (i + 1):
        i += 1
        h = pm_powmod(h, p, f, p)
        g = pm_gcd(f, pm_sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, i))
            f = pm_divmod(f, g, p)[0]
            h = pm_rem(h, f, p)
    if len(f) > 1:
        out.append((pm_monic(f, p), len(f) - 1))
    return out


def _edf(g: list[int], deg: int, p: int, rng: random.Random) -> list[list[int]]:
    """Cantor-Zassenhaus equal-degree splitting (p odd)."""
    n = len(g) - 1
    if n == deg:
        return [g]
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        _trim(a)
        if len(a) < 2:
            continue
        b = pm_powmod(a, (p**deg - 1) // 2, g, p)
        h = pm_gcd(g, pm_sub(b, [1], p), p)
        if 1 < len(h) < len(g):
            rest = pm_divmod(g, h, p)[0]
            return _edf(h, deg, p, rng) + _edf(pm_monic(rest, p), deg, p, rng)


def factor_mod_p(f: list[int], p: int, seed: int = 0) -> list[list[int]]:
    """Monic irreducible factors of a squarefree f modulo an odd prime p."""
    f = pm_monic(_trim([c % p for c in f]), p)
    rng = random.Random(seed * 1000003 + p)
    out = []
    for g, d in _ddf(f, p):
        out.extend(_edf(g, d, p, rng))
    out.sort()
    return out


# -- Hensel lifting ------------------------------------------------------------


def _sym(v: list[int], m: int) -> list[int]:
    half = m // 2
    return [c - m if c > half else c for c in v]


def _hensel_step(f, g, h, s, t, m):
    """One quadratic step: f = g*h mod m -> mod m^2 (h monic)."""
    m2 = m * m
    e = pm_sub(f, pm_mul(g, h, m2), m2)
    q, r = pm_divmod(pm_mul(s, e, m2), h, m2)
    g2 = pm_add(pm_add(g, pm_mul(t, e, m2), m2), pm_mul(q, g, m2), m2)
    h2 = pm_add(h, r, m2)
    b = pm_sub(pm_add(pm_mul(s, g2, m2), pm_mul(t, h2, m2), m2), [1], m2)
    c, d = pm_divmod(pm_mul(s, b, m2), h2, m2)
    s2 = pm_sub(s, d, m2)
    t2 = pm_sub(pm_sub(t, pm_mul(t, b, m2), m2), pm_mul(c, g2, m2), m2)
    return g2, h2, s2, t2, m2


def hensel_lift(f: list[int], factors: list[list[int]], p: int, bound: int) -> tuple[list[list[int]], int]:
    """Lift monic factors of f (mod p) to a modulus M = p^(2^k) > bound.

    ``f`` is an integer polynomial with lc(f) a unit mod p.  Returns lifted
    monic factors u_i with f = lc(f) * prod u_i mod M.
    """
    lifted = []
    rest_f = list(f)
    lc = f[-1]
    remaining = list(factors)
    modulus = p
    while modulus <= bound:
        modulus *= modulus
    while len(remaining) > 1:
        h = remaining.pop(0)
        g = [lc % p]
        for u in remaining:
            g = pm_mul(g, u, p)
        _, s, t = pm_xgcd(g, h, p)
        m = p
        gg, hh = g, h
        while m < modulus:
            gg, hh, s, t, m = _hensel_step(rest_f, gg, hh, s, t, m)
        lifted.append(hh)
        # continue lifting the cofactor; make it the new target polynomial
        rest_f = _sym([c % modulus for c in gg], modulus)
    inv = pow(lc, -1, modulus)
    last = pm_mul(rest_f, [inv], modulus)
    lifted.append(last)
    return lifted, modulus


# -- Zassenhaus -----------------------------------------------------------------


def _mignotte_bound(f: list[int]) -> int:
    n = len(f) - 1
    norm2 = isqrt(sum(c * c for c in f)) + 1
    return (2**n) * norm2 * abs(f[-1])


def _zz_divmod_exact(a: list[int], b: list[int]) -> list[int] | None:
    """Integer polynomial division; None when b does not divide a over Z."""
    r = list(a)
    db = len(b) - 1
    lcb = b[-1]
    if len(r) - 1 < db:
        return None
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if not c:
            continue
        if c % lcb:
            return None
        c //= lcb
        q[k - db] = c
        for j, bj in enumerate(b):
            r[k - db + j] -= c * bj
    if any(r[:db]):
        return None
    return q


def _primitive(v: list[int]) -> list[int]:
    from .poly import int_content

    g = int_content(v)
    if v[-1] < 0:
        g = -g
    return [c // g for c in v]


def _subset_sums(degs: list[int]) -> set[int]:
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


def _choose_prime(f: list[int], tries: int = 7):
    """Pick a small odd prime with few modular factors; detect irreducibility early.

    Only distinct-degree data is computed per candidate prime; the full
    equal-degree split is done once, for the winner.
    """
    n = len(f) - 1
    possible = set(range(1, n))
    best = None
    p = 2
    found = 0
    df = [i * c for i, c in enumerate(f)][1:]
    while found < tries:
        p = int(nextprime(p))
        if f[-1] % p == 0:
            continue
        fp = [c % p for c in f]
        if len(pm_gcd(fp, [c % p for c in df], p)) > 1:
            continue
        found += 1
        ddf = _ddf(pm_monic(_trim(fp), p), p)
        degs = [d for g, d in ddf for _ in range((len(g) - 1) // d)]
        possible &= _subset_sums(degs)
        if best is None or len(degs) < best[1]:
            best = (p, len(degs))
        if not possible:
            return None
    p = best[0]
    return p, factor_mod_p([c % p for c in f], p)


def _factor_squarefree_zz(f: list[int]) -> list[list[int]]:
    """Irreducible factors over Z of a primitive squarefree f with lc > 0."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    choice = _choose_prime(f)
    if choice is None:
        return [f]
    p, facs = choice
    if len(facs) == 1:
        return [f]
    bound = 2 * _mignotte_bound(f)
    lifted, modulus = hensel_lift(f, facs, p, bound)
    result = []
    remaining = list(range(len(lifted)))
    cur = list(f)
    s = 1
    while 2 * s <= len(remaining):
        hit = False
        for subset in combinations(remaining, s):
            lc = cur[-1]
            g = [lc % modulus]
            for i in subset:
                g = pm_mul(g, lifted[i], modulus)
            g = _sym(g, modulus)
            if cur[0] and g[0] and (lc * cur[0]) % g[0]:
                continue
            g = _primitive(g)
            q = _zz_divmod_exact(cur, g)
            if q is None:
                continue
            result.append(g)
            cur = q
            remaining = [i for i in remaining if i not in subset]
            hit = True
            break
        if not hit:
            s += 1
    result.append(_primitive(cur))
    return result


def factor_rational_poly(f: Poly, cap: int = DEFAULT_FACTOR_CAP) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Complete factorization over Q.

    Returns ``(content, [(q, e), ...])`` with monic irreducible q such that
    ``f == content * prod q**e``.  Factors are sorted by (degree, coefficients).
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree > cap:
        raise FactorCapError(f.degree, cap)
    lc = Fraction(f.lc)
    out: list[tuple[Poly, int]] = []
    for block, mult in squarefree_decompose(f):
        _, prim = content_and_primitive(block)
        for g in _factor_squarefree_zz(prim):
            out.append((Poly(g).monic(), mult))
    out.sort(key=lambda item: (item[0].degree, [Fraction(c) for c in item[0].coeffs]))
    return lc, out


def irreducible_factors(f: Poly, cap: int = DEFAULT_FACTOR_CAP) -> list[Poly]:
    """Distinct monic irreducible factors of f (multiplicities dropped)."""
    return [q for q, _ in factor_rational_poly(f, cap)[1]]


def is_irreducible(f: Poly, cap: int = DEFAULT_FACTOR_CAP) -> bool:
    if f.degree <= 0:
        return False
    _, facs = factor_rational_poly(f, cap)
    return len(facs) == 1 and facs[0][1] == 1
