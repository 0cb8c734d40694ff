"""Reduction modulo primes, portraits over F_p and squarefree-portrait witnesses."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from sympy import factorint, isprime, primerange

from .dynamics import INF, ProjPoint, RationalMap, homogeneous_resultant, iterate
from .heights import infinity_in_orbit, orbit_behavior


class BadReductionError(ValueError):
    pass


class AtInfinityError(ValueError):
    """An endpoint reduces to (or globally is) the point at infinity."""


class PreperiodicPointError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Portrait:
    m: int
    n: int


class Val(Enum):
    ZERO = "0"
    ONE = "1"
    AT_LEAST_2 = ">=2"


@dataclass(frozen=True)
class ValuationReport:
    prime: int
    value: Val
    both_affine: bool


@dataclass(frozen=True)
class Witness:
    prime: int
    portrait: Portrait
    squarefree: bool
    verification: dict = field(compare=False)


@dataclass
class WitnessSearch:
    """Witnesses in increasing prime order plus the primes that were skipped."""

    witnesses: list[Witness]
    skipped: list[tuple[int, str]]
    p_max: int

    def __iter__(self):
        return iter(self.witnesses)

    def __len__(self):
        return len(self.witnesses)

    def primes(self) -> list[int]:
        return [w.prime for w in self.witnesses]


def _resultant(phi: RationalMap) -> int:
    return phi.cache_get(("res",), lambda: homogeneous_resultant(phi))


def is_good_prime(phi: RationalMap, p: int) -> bool:
    return _resultant(phi) % p != 0


def _check_prime(phi: RationalMap, p: int) -> None:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if not is_good_prime(phi, p):
        raise BadReductionError(f"bad reduction at p={p}")


# -- arithmetic on P^1(F_p) -------------------------------------------------------


def reduce_point(point: ProjPoint, p: int):
    """r_p(point): an int in [0, p) or INF."""
    a, b = point.a % p, point.b % p
    if b == 0:
        return INF
    return a * pow(b, -1, p) % p


def _form_mod(coeffs, a, b, mod):
    # homogeneous Horner for sum c_i a^i b^(d-i)
    d = len(coeffs) - 1
    acc = coeffs[d] % mod
    bp = 1
    for i in range(d - 1, -1, -1):
        bp = bp * b % mod
        acc = (acc * a + coeffs[i] * bp) % mod
    return acc


def reduced_step(phi: RationalMap, x, p: int):
    """phi-bar(x) on P^1(F_p) for a prime of good reduction."""
    a, b = (1, 0) if x is INF else (x, 1)
    fa = _form_mod(phi.F, a, b, p)
    ga = _form_mod(phi.G, a, b, p)
    if ga == 0:
        return INF
    return fa * pow(ga, -1, p) % p


def portrait_of_reduced(phi: RationalMap, x0, p: int) -> Portrait:
    """Walk x_{k+1} = phi-bar(x_k) until the first repeat."""
    seen = {}
    x = x0
    k = 0
    while x not in seen:
        seen[x] = k
        x = reduced_step(phi, x, p)
        k += 1
    m = seen[x]
    return Portrait(m, k - m)


def portrait_mod_p(phi: RationalMap, alpha: ProjPoint, p: int) -> Portrait:
    _check_prime(phi, p)
    return portrait_of_reduced(phi, reduce_point(alpha, p), p)


def is_periodic_mod_p(phi: RationalMap, x, p: int) -> bool:
    _check_prime(phi, p)
    return portrait_of_reduced(phi, x, p).m == 0


# -- valuations via Z/p^2 ----------------------------------------------------------


def _lift_orbit(F, G, a: int, b: int, steps: int, mod: int) -> list[tuple[int, int]]:
    out = [(a % mod, b % mod)]
    for _ in range(steps):
        a, b = out[-1]
        out.append((_form_mod(F, a, b, mod), _form_mod(G, a, b, mod)))
    return out


def _classify(cross: int, p: int) -> Val:
    cross %= p * p
    if cross == 0:
        return Val.AT_LEAST_2
    if cross % p == 0:
        return Val.ONE
    return Val.ZERO


def valuation_of_difference(
    phi: RationalMap, alpha: ProjPoint, m: int, n: int, p: int, strict: bool = True
) -> ValuationReport:
    """ord_p(phi^(m+n)(alpha) - phi^m(alpha)) classified into {0, 1, >=2}."""
    _check_prime(phi, p)
    pts = _lift_orbit(phi.F, phi.G, alpha.a, alpha.b, m + n, p * p)
    for a, b in pts:
        if a % p == 0 and b % p == 0:
            raise ArithmeticError(f"internal error: coordinates vanish mod {p}")
    a1, b1 = pts[m + n]
    a0, b0 = pts[m]
    affine = b1 % p != 0 and b0 % p != 0
    if not affine and strict:
        raise AtInfinityError(f"at-infinity: an endpoint reduces to infinity mod {p}")
    return ValuationReport(p, _classify(a1 * b0 - a0 * b1, p), affine)


# -- squarefree portraits ----------------------------------------------------------


def check_global_preconditions(phi: RationalMap, alpha: ProjPoint, m: int, n: int) -> None:
    """alpha wandering and both global endpoints finite; raises otherwise."""
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    if orbit_behavior(phi, alpha).preperiodic:
        raise PreperiodicPointError(f"alpha={alpha} is preperiodic")
    k = infinity_in_orbit(phi, alpha)
    if k is not None and k in (m, m + n):
        raise AtInfinityError(f"at-infinity: phi^{k}(alpha) is infinity")


def _portrait_matches(xs: list, m: int, n: int) -> bool:
    # xs = reductions of phi^0..phi^(m+n); portrait (m, n) iff x_{m+n} = x_m,
    # no smaller period and no shorter tail
    if xs[m + n] != xs[m]:
        return False
    if any(xs[m + j] == xs[m] for j in range(1, n)):
        return False
    return m == 0 or xs[m - 1] != xs[m - 1 + n]


def _reduce_pair(a: int, b: int, p: int):
    a, b = a % p, b % p
    if b == 0:
        return INF
    return a * pow(b, -1, p) % p


def is_squarefree_portrait(phi: RationalMap, alpha: ProjPoint, m: int, n: int, p: int) -> bool:
    check_global_preconditions(phi, alpha, m, n)
    if portrait_mod_p(phi, alpha, p) != Portrait(m, n):
        return False
    return valuation_of_difference(phi, alpha, m, n, p).value is Val.ONE


def _scan_block(args) -> tuple[list[tuple[int, str]], list[tuple[int, str]]]:
    F, G, R, a, b, m, n, primes = args
    hits, skips = [], []
    for p in primes:
        if R % p == 0:
            continue
        pts = _lift_orbit(F, G, a, b, m + n, p * p)
        xs = [_reduce_pair(x, y, p) for x, y in pts]
        if not _portrait_matches(xs, m, n):
            continue
        if xs[m] is INF:
            skips.append((p, "endpoint reduces to infinity"))
            continue
        (a1, b1), (a0, b0) = pts[m + n], pts[m]
        val = _classify(a1 * b0 - a0 * b1, p)
        if val is Val.ONE:
            hits.append((p, val.value))
    return hits, skips


def default_workers() -> int:
    env = os.environ.get("DYNAPORT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _exact_ord(phi: RationalMap, alpha: ProjPoint, m: int, n: int, p: int) -> int:
    x = iterate(phi, alpha, m).value()
    y = iterate(phi, alpha, m + n).value()
    diff = Fraction(y) - Fraction(x)
    if diff == 0:
        return 10**9
    ordp = 0
    num, den = diff.numerator, diff.denominator
    while num % p == 0:
        num //= p
        ordp += 1
    while den % p == 0:
        den //= p
        ordp -= 1
    return ordp


_EXACT_BIT_LIMIT = 200_000


def verify_witness(phi: RationalMap, alpha: ProjPoint, m: int, n: int, p: int) -> dict:
    """Independent re-check: dictionary walk over F_p plus a separate valuation route.

    The valuation is recomputed in exact rational arithmetic when the global
    iterates are small enough, otherwise by the Z/p^2 lift.
    """
    walk = portrait_mod_p(phi, alpha, p)
    est_bits = max(abs(alpha.a), abs(alpha.b), 2).bit_length() * phi.degree ** (m + n)
    if est_bits <= _EXACT_BIT_LIMIT:
        ordp = _exact_ord(phi, alpha, m, n, p)
        method = "exact"
        val_ok = ordp == 1
    else:
        rep = valuation_of_difference(phi, alpha, m, n, p)
        ordp = {Val.ZERO: 0, Val.ONE: 1, Val.AT_LEAST_2: 2}[rep.value]
        method = "lift_p2"
        val_ok = rep.value is Val.ONE
    return {
        "method": method,
        "portrait": [walk.m, walk.n],
        "ord": ordp if ordp < 2 else ">=2",
        "passed": walk == Portrait(m, n) and val_ok,
    }


def search_witnesses(
    phi: RationalMap,
    alpha: ProjPoint,
    m: int,
    n: int,
    p_max: int,
    exclude=(),
    workers: int | None = None,
    block_size: int = 4096,
) -> WitnessSearch:
    """All primes p <= p_max giving alpha a squarefree portrait (m, n) mod p."""
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    check_global_preconditions(phi, alpha, m, n)
    exclude = set(exclude)
    R = _resultant(phi)
    primes = [p for p in primerange(2, p_max + 1) if p not in exclude]
    blocks = [primes[i : i + block_size] for i in range(0, len(primes), block_size)]
    jobs = [(phi.F, phi.G, R, alpha.a, alpha.b, m, n, blk) for blk in blocks]
    workers = workers or default_workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_scan_block, jobs))
    else:
        results = [_scan_block(j) for j in jobs]
    hits = sorted(p for h, _ in results for p, _ in h)
    skipped = sorted(s for _, sk in results for s in sk)
    witnesses = []
    for p in hits:
        ver = verify_witness(phi, alpha, m, n, p)
        if not ver["passed"]:
            raise ArithmeticError(f"internal error: witness p={p} failed re-verification")
        witnesses.append(Witness(p, Portrait(m, n), True, ver))
    return WitnessSearch(witnesses, skipped, p_max)


def common_reduction_primes(x: ProjPoint, y: ProjPoint) -> set[int]:
    """Primes p with r_p(x) = r_p(y)."""
    if x == y:
        raise ValueError("x and y must differ")
    return set(factorint(abs(x.a * y.b - x.b * y.a)))


__all__ = [
    "AtInfinityError",
    "BadReductionError",
    "Portrait",
    "PreperiodicPointError",
    "Val",
    "ValuationReport",
    "Witness",
    "WitnessSearch",
    "common_reduction_primes",
    "is_periodic_mod_p",
    "is_squarefree_portrait",
    "portrait_mod_p",
    "reduce_point",
    "reduced_step",
    "search_witnesses",
    "valuation_of_difference",
    "verify_witness",
]
