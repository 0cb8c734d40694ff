"""Three-valued membership tests for A_1(phi, alpha) and A_2(phi).

Point sets are handled as Galois-stable blocks: a squarefree polynomial over
the base field (its roots) plus a flag for infinity.  Critical-orbit
avoidance is decided by gcds against the orbit polynomials, so a block
splits into the part lying on some critical orbit and the part avoiding all
of them without factoring anything.

If a point xi lies on no critical orbit O_i = {phi^k(c) : k >= 1}, no preimage
of xi lies on one either (its image would) and no preimage is critical (xi
would be a critical value), so the whole backward tree under xi is
unramified and infinite.  That is the Yes certificate.  A No is returned only
when the unramified backward tree is exhausted inside the critical orbits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .base_rings import QQt, ONE, Poly, poly_gcd, poly_lcm, squarefree_decompose, squarefree_part
from .base_rings.factor import FactorCapError
from .dynamics import (
    INF,
    CapError,
    ProjPoint,
    RationalMap,
    critical_locus,
    critical_value_poly,
    divisors,
    dynatomic,
    iterate,
    minimal_polynomial,
    period_numerator,
)
from .heights import (
    escape_threshold,
    log_int,
    minpoly_height_bounds,
    orbit_behavior,
    weil_height,
)
from .portraits import PreperiodicPointError
from .serialize import SCHEMA_VERSION, map_to_json, poly_to_json

DEFAULT_ORBIT_CAP = 48
DEFAULT_BLOCK_DEGREE_CAP = 1024


class Status(Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


class Termination(Enum):
    HEIGHT_DOMINANCE = "HeightDominance"
    CRITICAL_CYCLE_CLOSED = "CriticalCycleClosed"


# -- blocks -------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """Roots of a monic squarefree poly over the base field, plus maybe infinity."""

    poly: Poly
    inf: bool = False

    @classmethod
    def empty(cls, base) -> "Block":
        return cls(_one(base), False)

    @classmethod
    def of_point(cls, pt: ProjPoint, base) -> "Block":
        if pt.is_infinity():
            return cls(_one(base), True)
        one = base.to_field(1)
        return cls(Poly((-pt.value(), one)), False)

    def is_empty(self) -> bool:
        return self.poly.degree <= 0 and not self.inf

    @property
    def size(self) -> int:
        return max(self.poly.degree, 0) + (1 if self.inf else 0)

    def minus(self, other: "Block") -> "Block":
        g = poly_gcd(self.poly, other.poly)
        p = self.poly.exact_div(g).monic() if g.degree > 0 else self.poly
        return Block(p, self.inf and not other.inf)

    def union(self, other: "Block") -> "Block":
        return Block(poly_lcm(self.poly, other.poly), self.inf or other.inf)

    def meet(self, other: "Block") -> "Block":
        return Block(poly_gcd(self.poly, other.poly), self.inf and other.inf)


def _one(base) -> Poly:
    return Poly((base.to_field(1),)) if base is QQt else ONE


def _compose_numerator(phi: RationalMap, B: Poly) -> tuple[Poly, int]:
    """Numerator of B(phi(x)) and the multiplicity of infinity among its roots."""
    base = phi.base
    f = base.field_poly(phi.f)
    g = base.field_poly(phi.g)
    e = B.degree
    gpow = [_one(base)]
    for _ in range(e):
        gpow.append(gpow[-1] * g)
    acc = Poly((B[e],))
    for i in range(e - 1, -1, -1):
        acc = acc * f + gpow[e - i] * B[i]
    return acc, phi.degree * e - acc.degree


def unramified_preimages(phi: RationalMap, block: Block) -> tuple[Block, Block]:
    """(all preimages, unramified preimages) of a block, both as blocks."""
    base = phi.base
    crit = critical_locus(phi)
    Q = _one(base)
    inf_mult = 0
    if block.poly.degree > 0:
        Q, inf_mult = _compose_numerator(phi, block.poly)
    if block.inf:
        g = base.field_poly(phi.g)
        Q = Q * g if g.degree > 0 else Q
        inf_mult += phi.degree - g.degree
    S = squarefree_part(Q) if Q.degree > 0 else _one(base)
    allpre = Block(S, inf_mult > 0)
    W = crit.W
    unram = S
    if W.degree > 0:
        h = poly_gcd(S, W)
        if h.degree > 0:
            unram = S.exact_div(h).monic()
    return allpre, Block(unram, inf_mult > 0 and not crit.infinity_is_critical)


# -- heights of blocks --------------------------------------------------------------


def block_height_upper(block: Block, base) -> float:
    """Upper bound on h(xi) for every xi in the block."""
    f = block.poly
    if f.degree <= 0:
        return 0.0
    if f.degree == 1:
        return weil_height(ProjPoint.from_value(-f[0] / f[1], base))
    if base is QQt:
        coeffs = QQt.clear_denominators(list(f.coeffs))
        g = QQt.ring_gcd(coeffs)
        if g.degree > 0:
            coeffs = [c.exact_div(g) for c in coeffs]
        return float(max(c.degree for c in coeffs if c))
    # h(xi) <= log M(minpoly) <= log M(f) <= log |f|_2 for primitive integer f
    from .base_rings import content_and_primitive

    _, v = content_and_primitive(f)
    return 0.5 * log_int(sum(c * c for c in v))


def _orbit_point_lower(pt, base) -> float:
    if pt is INF:
        return 0.0
    if isinstance(pt, ProjPoint):
        return weil_height(pt)
    return minpoly_height_bounds(minimal_polynomial(pt, base), base)[0]


# -- certificates and verdicts -------------------------------------------------------


@dataclass
class AvoidanceCertificate:
    """Node block xi with phi^depth(xi) in the target block, avoiding every critical orbit."""

    depth: int
    node: Block
    target: Block
    checked_orbit_range: int
    termination_reason: Termination
    threshold: float = 0.0
    node_height_upper: float = 0.0

    def to_json(self, phi: RationalMap) -> dict:
        base = phi.base
        return {
            "schema_version": SCHEMA_VERSION,
            "map": map_to_json(phi),
            "target": {"poly": poly_to_json(self.target.poly, base), "inf": self.target.inf},
            "depth": self.depth,
            "node_minpoly": poly_to_json(self.node.poly, base),
            "node_inf": self.node.inf,
            "checked_orbit_range": self.checked_orbit_range,
            "termination_reason": self.termination_reason.value,
        }


@dataclass
class Verdict:
    status: Status
    certificate: AvoidanceCertificate | None = None
    reason: str | None = None
    bound_hit: str | None = None
    detail: dict = field(default_factory=dict)

    @property
    def symbol(self) -> str:
        return {Status.YES: "Y", Status.NO: "N", Status.UNKNOWN: "?"}[self.status]

    def to_json(self, phi: RationalMap | None = None) -> dict:
        out = {"status": self.status.value}
        if self.reason:
            out["reason"] = self.reason
        if self.bound_hit:
            out["bound_hit"] = self.bound_hit
        if self.certificate is not None and phi is not None:
            out["certificate"] = self.certificate.to_json(phi)
        for k in sorted(self.detail):
            out[k] = self.detail[k]
        return out


def _yes(cert, **detail) -> Verdict:
    return Verdict(Status.YES, certificate=cert, detail=detail)


def _no(reason: str, **detail) -> Verdict:
    return Verdict(Status.NO, reason=reason, detail=detail)


def _unknown(bound: str, **detail) -> Verdict:
    return Verdict(Status.UNKNOWN, bound_hit=bound, detail=detail)


# -- avoidance ----------------------------------------------------------------------


@dataclass
class _Avoidance:
    rem: Block
    in_orbit: Block
    K: int
    reason: Termination | None  # None: orbit cap hit before termination


def _terminated(phi: RationalMap, K: int, U: float, thr: float) -> Termination | None:
    crit = critical_locus(phi)
    crit.extend(K)
    base = phi.base
    bar = max(thr, U)
    used_height = False
    for cls in crit.classes:
        if cls.closed and K >= len(cls.orbit) + 1:
            continue
        pt = crit.orbit_point(cls, K)
        if pt is not INF and _orbit_point_lower(pt, base) > bar + 1e-9:
            used_height = True
            continue
        return None
    return Termination.HEIGHT_DOMINANCE if used_height else Termination.CRITICAL_CYCLE_CLOSED


def avoid(phi: RationalMap, block: Block, orbit_cap: int = DEFAULT_ORBIT_CAP) -> _Avoidance:
    """Split a block into its part on critical orbits and the part avoiding them."""
    base = phi.base
    crit = critical_locus(phi)
    thr = escape_threshold(phi)
    rem = block
    hit = Block.empty(base)
    if not crit.classes:
        return _Avoidance(rem, hit, 0, Termination.CRITICAL_CYCLE_CLOSED)
    for k in range(1, orbit_cap + 1):
        op, inf = crit.orbit_poly(k)
        part = rem.meet(Block(op, inf))
        if not part.is_empty():
            rem = rem.minus(part)
            hit = hit.union(part)
        if rem.is_empty():
            return _Avoidance(rem, hit, k, Termination.CRITICAL_CYCLE_CLOSED)
        reason = _terminated(phi, k, block_height_upper(rem, base), thr)
        if reason is not None:
            return _Avoidance(rem, hit, k, reason)
    return _Avoidance(rem, hit, orbit_cap, None)


def _du_search(
    phi: RationalMap,
    target: Block,
    depth_cap: int | None,
    orbit_cap: int,
    degree_cap: int,
) -> Verdict:
    base = phi.base
    depth_cap = depth_cap if depth_cap is not None else 2 * phi.degree**3
    frontier = target
    seen = Block.empty(base)
    pending = None
    for depth in range(1, depth_cap + 1):
        if frontier.size * phi.degree > degree_cap:
            return _unknown("block_degree", depth=depth)
        _, level = unramified_preimages(phi, frontier)
        if depth == 1 and level.is_empty():
            return _no("ALL_PREIMAGES_RAMIFIED")
        level = level.minus(seen)
        av = avoid(phi, level, orbit_cap)
        if not av.rem.is_empty():
            if av.reason is not None:
                cert = AvoidanceCertificate(
                    depth,
                    av.rem,
                    target,
                    av.K,
                    av.reason,
                    escape_threshold(phi),
                    block_height_upper(av.rem, base),
                )
                return _yes(cert)
            pending = pending or f"orbit_range:{orbit_cap}"
        if av.in_orbit.is_empty():
            break
        seen = seen.union(av.in_orbit)
        frontier = av.in_orbit
    else:
        return _unknown(pending or f"depth:{depth_cap}")
    if pending:
        return _unknown(pending)
    return _no("BACKWARD_TREE_FINITE")


def _as_block(phi: RationalMap, target) -> Block:
    base = phi.base
    if isinstance(target, Block):
        return target
    if isinstance(target, ProjPoint):
        return Block.of_point(target, base)
    if isinstance(target, Poly):
        return Block(squarefree_part(base.field_poly(target)), False)
    return Block.of_point(ProjPoint.from_value(target, base), base)


def is_dynamically_unramified(
    phi: RationalMap,
    target,
    depth_cap: int | None = None,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
    degree_cap: int = DEFAULT_BLOCK_DEGREE_CAP,
) -> Verdict:
    """Yes iff some point of the target block has an infinite unramified backward orbit.

    ``target`` is a ProjPoint, a field value, a polynomial (its roots) or a Block.
    """
    return _du_search(phi, _as_block(phi, target), depth_cap, orbit_cap, degree_cap)


# -- A_1 ----------------------------------------------------------------------------


def _check_wandering(phi: RationalMap, alpha: ProjPoint) -> None:
    if orbit_behavior(phi, alpha).preperiodic:
        raise PreperiodicPointError(f"alpha={alpha} is preperiodic")


def a1_fast_path(phi: RationalMap, alpha: ProjPoint, m: int, orbit_cap: int = DEFAULT_ORBIT_CAP) -> Verdict | None:
    """Pigeonhole route through phi^-3(phi^m(alpha)); returns None when inconclusive.

    When v = phi^m(alpha) is not a critical value of phi^3, the d^3 points of
    phi^-3(v) are distinct and unramified, and the d^3 - d^2 of them whose
    phi^2-image differs from phi^(m-1)(alpha) are candidates for gamma; any
    gamma off the critical orbits gives eta = phi^2(gamma).
    """
    if m < 1:
        return None
    base = phi.base
    v = iterate(phi, alpha, m)
    e = iterate(phi, alpha, m - 1)
    try:
        cv, cv_inf = critical_value_poly(phi, 3)
    except CapError:
        return None
    vb = Block.of_point(v, base)
    if not vb.meet(Block(cv, cv_inf)).is_empty():
        return None
    level = vb
    for _ in range(3):
        level = unramified_preimages(phi, level)[1]
    # drop gamma with phi^2(gamma) = e
    eb = Block.of_point(e, base)
    for _ in range(2):
        eb = unramified_preimages(phi, eb)[0]
    gamma = level.minus(eb)
    if gamma.is_empty():
        return None
    av = avoid(phi, gamma, orbit_cap)
    if av.rem.is_empty() or av.reason is None:
        return None
    eta = Block.of_point(v, base)
    eta = unramified_preimages(phi, eta)[1].minus(Block.of_point(e, base))
    cert = AvoidanceCertificate(2, av.rem, eta, av.K, av.reason, escape_threshold(phi), block_height_upper(av.rem, base))
    return _yes(cert, route="fast")


def a1_verdict(
    phi: RationalMap,
    alpha: ProjPoint,
    m: int,
    method: str = "auto",
    depth_cap: int | None = None,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
) -> Verdict:
    """Decide m in A_1(phi, alpha); method is 'auto', 'fast' or 'slow'."""
    if m < 0:
        raise ValueError("m must be >= 0")
    _check_wandering(phi, alpha)
    base = phi.base
    if m == 0:
        v = is_dynamically_unramified(phi, alpha, depth_cap, orbit_cap)
        if v.status is Status.NO:
            v.detail["du_reason"] = v.reason
            v.reason = "NOT_DYNAMICALLY_UNRAMIFIED"
        return v
    if method in ("auto", "fast"):
        fast = a1_fast_path(phi, alpha, m, orbit_cap)
        if fast is not None or method == "fast":
            return fast if fast is not None else _unknown("fast_path_inconclusive")
    v = iterate(phi, alpha, m)
    e = iterate(phi, alpha, m - 1)
    allpre, unram = unramified_preimages(phi, Block.of_point(v, base))
    excluded = Block.of_point(e, base)
    others = allpre.minus(excluded)
    if others.is_empty():
        return _no("POINT_EQUALS_EXCLUDED_BRANCH")
    eta = unram.minus(excluded)
    if eta.is_empty():
        return _no("ALL_PREIMAGES_RAMIFIED")
    du = _du_search(phi, eta, depth_cap, orbit_cap, DEFAULT_BLOCK_DEGREE_CAP)
    if du.status is Status.NO:
        return _no("NOT_DYNAMICALLY_UNRAMIFIED", du_reason=du.reason)
    du.detail["route"] = "slow"
    return du


# -- A_2 ----------------------------------------------------------------------------


def exact_period_block(phi: RationalMap, n: int) -> tuple[Poly, str | None]:
    """Multiplicity-one part of phi^n(x) - x made of points of exact period n.

    Returns (block, reason) where reason names the obstruction when the block
    is trivial.
    """
    base = phi.base
    P = period_numerator(phi, n)
    mult_one = _one(base)
    for a, mult in squarefree_decompose(P):
        if mult == 1:
            mult_one = a
    if mult_one.degree <= 0:
        return mult_one, "NO_SQUAREFREE_FACTOR"
    B = poly_gcd(mult_one, dynatomic(phi, n))
    for k in divisors(n)[:-1]:
        h = poly_gcd(B, period_numerator(phi, k))
        if h.degree > 0:
            B = B.exact_div(h).monic()
    if B.degree <= 0:
        return B, "SMALLER_PERIOD_ONLY"
    return B, None


def a2_verdict(
    phi: RationalMap,
    n: int,
    depth_cap: int | None = None,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
    dynatomic_cap: int = 8,
) -> Verdict:
    """Decide n in A_2(phi)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > dynatomic_cap:
        return _unknown(f"dynatomic_n:{dynatomic_cap}")
    base = phi.base
    B, reason = exact_period_block(phi, n)
    if reason:
        return _no(reason)
    # preimages of the period-n block: the cycle itself (phi^(n-1)(beta)) plus the rest
    allpre, unram = unramified_preimages(phi, Block(B, False))
    eta = unram.minus(Block(B, False))
    if eta.is_empty():
        return _no("ALL_PREIMAGES_RAMIFIED", period_block_degree=B.degree)
    try:
        du = _du_search(phi, eta, depth_cap, orbit_cap, DEFAULT_BLOCK_DEGREE_CAP)
    except FactorCapError as exc:
        return _unknown(f"factor_cap:{exc.cap}")
    du.detail["period_block_degree"] = B.degree
    if du.status is Status.NO:
        return _no("NOT_DYNAMICALLY_UNRAMIFIED", du_reason=du.reason, period_block_degree=B.degree)
    return du


# -- table --------------------------------------------------------------------------


@dataclass
class AdmissibleTable:
    a1: list[Verdict]
    a2: list[Verdict]

    def cell(self, m: int, n: int) -> Status:
        s1, s2 = self.a1[m].status, self.a2[n - 1].status
        if Status.NO in (s1, s2):
            return Status.NO
        if Status.UNKNOWN in (s1, s2):
            return Status.UNKNOWN
        return Status.YES

    def summary(self) -> dict:
        cells = [self.cell(m, n) for m in range(len(self.a1)) for n in range(1, len(self.a2) + 1)]
        return {
            "yes": sum(c is Status.YES for c in cells),
            "no": sum(c is Status.NO for c in cells),
            "unknown": sum(c is Status.UNKNOWN for c in cells),
            "a1_excluded": [m for m, v in enumerate(self.a1) if v.status is Status.NO],
            "a2_excluded": [n + 1 for n, v in enumerate(self.a2) if v.status is Status.NO],
        }


def admissible_table(phi: RationalMap, alpha: ProjPoint, max_m: int, max_n: int, **caps) -> AdmissibleTable:
    # one pass over the critical data up front so later cells only read it
    critical_locus(phi).extend(caps.get("orbit_cap", DEFAULT_ORBIT_CAP) // 4)
    shared = {k: caps[k] for k in ("depth_cap", "orbit_cap") if k in caps}
    a1_opts = dict(shared, **({"method": caps["method"]} if "method" in caps else {}))
    a2_opts = dict(shared, **({"dynatomic_cap": caps["dynatomic_cap"]} if "dynatomic_cap" in caps else {}))
    a1 = [a1_verdict(phi, alpha, m, **a1_opts) for m in range(max_m + 1)]
    a2 = [a2_verdict(phi, n, **a2_opts) for n in range(1, max_n + 1)]
    return AdmissibleTable(a1, a2)


__all__ = [
    "AdmissibleTable",
    "AvoidanceCertificate",
    "Block",
    "Status",
    "Termination",
    "Verdict",
    "a1_fast_path",
    "a1_verdict",
    "a2_verdict",
    "admissible_table",
    "avoid",
    "exact_period_block",
    "is_dynamically_unramified",
    "unramified_preimages",
]
