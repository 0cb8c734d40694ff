"""Built-in example runs for ``dynaport verify``.

Expected A1 rows are not hard-coded: they come from walking the orbit of
alpha and applying the three-case rule for x^2 + c style maps, which is
independent of the avoidance engine that produces the verdicts.
"""

from __future__ import annotations

import json

from ..admissible import Status, a1_verdict, a2_verdict
from ..base_rings import QQ, QQt
from ..certcheck import verify_certificate
from ..dynamics import ProjPoint, iterate
from ..funcfield import ff_search_witnesses, gleason_check
from ..portraits import PreperiodicPointError, search_witnesses
from .expr import parse_map, parse_point


def expected_a1_row(phi, alpha: ProjPoint, m_max: int, fixed: ProjPoint, partner: ProjPoint) -> str:
    """Y/N row from the rule: exclude M where phi^M(alpha) = fixed, M+1 where it is partner.

    ``fixed`` is the point whose only other preimage is critical (1 for
    x^2+1, t for x^2+t) and ``partner`` its negative.
    """
    row = ["Y"] * (m_max + 1)
    x = alpha
    for M in range(m_max + 1):
        if x == fixed:
            row[M] = "N"
        if x == partner and M + 1 <= m_max:
            row[M + 1] = "N"
        x = iterate(phi, x, 1)
    return "".join(row)


def _check(name: str, passed: bool, detail: str, informational: bool = False) -> dict:
    out = {"name": name, "passed": bool(passed), "detail": detail}
    if informational:
        out["informational"] = True
    return out


def _cert_ok(phi, verdict) -> bool:
    if verdict.certificate is None:
        return verdict.status is not Status.YES
    verify_certificate(json.loads(json.dumps(verdict.certificate.to_json(phi))))
    return True


def _a1_rows(phi, cases, m_max: int) -> list[dict]:
    checks = []
    for label, alpha, fixed, partner in cases:
        vs = [a1_verdict(phi, alpha, m) for m in range(m_max + 1)]
        got = "".join(v.symbol for v in vs)
        want = expected_a1_row(phi, alpha, m_max, fixed, partner)
        certs = all(_cert_ok(phi, v) for v in vs)
        checks.append(_check(f"A1 alpha={label} m=0..{m_max}", got == want and certs, f"got {got}, expected {want}"))
    return checks


def _a2_rows(phi, n_max: int) -> list[dict]:
    vs = [a2_verdict(phi, n) for n in range(1, n_max + 1)]
    got = "".join(v.symbol for v in vs)
    certs = all(_cert_ok(phi, v) for v in vs)
    return [_check(f"A2 n=1..{n_max}", got == "Y" * n_max and certs, f"got {got}, certificates re-verified={certs}")]


NF_WITNESS_CELLS = {(0, 1): 3, (1, 1): 7, (2, 1): 31, (2, 2): 11, (1, 3): 97}
NF_REPORTED_CELLS = [(0, 2), (0, 3), (1, 2), (2, 3)]


def fixture_nf_x2p1(workers=None) -> list[dict]:
    phi = parse_map("x^2+1", QQ)
    P = lambda s: parse_point(s, QQ)  # noqa: E731
    one, minus_one = P("1"), P("-1")
    checks = _a2_rows(phi, 6)
    checks += _a1_rows(phi, [("1", one, one, minus_one), ("-1", minus_one, one, minus_one), ("3", P("3"), one, minus_one)], 10)
    alpha = P("2")
    for (m, n), p0 in sorted(NF_WITNESS_CELLS.items()):
        res = search_witnesses(phi, alpha, m, n, 1000, workers=workers)
        ok = res.primes()[:1] == [p0] and all(w.verification["passed"] for w in res)
        checks.append(_check(f"witness alpha=2 (m,n)=({m},{n})", ok, f"primes <= 1000: {res.primes()}"))
    for m, n in NF_REPORTED_CELLS:
        res = search_witnesses(phi, alpha, m, n, 1000, workers=workers)
        checks.append(_check(f"witness alpha=2 (m,n)=({m},{n})", bool(len(res)), f"primes <= 1000: {res.primes()}", informational=True))
    return checks


def fixture_ff_x2pt(workers=None) -> list[dict]:
    phi = parse_map("x^2+t", QQt)
    P = lambda s: parse_point(s, QQt)  # noqa: E731
    t, mt = P("t"), P("-t")
    checks = _a2_rows(phi, 3)
    checks += _a1_rows(phi, [("t", t, t, mt), ("-t", mt, t, mt), ("t+3", P("t+3"), t, mt)], 6)
    rows = gleason_check(10)
    checks.append(_check("Gleason n=1..10", all(sq for _, sq in rows), " ".join(f"{n}:{'sf' if sq else 'NOT sf'}" for n, sq in rows)))
    res = ff_search_witnesses(phi, t, 1, 1)
    got = [(str(w.place), w.valuation, (w.portrait.m, w.portrait.n)) for w in res]
    checks.append(_check("ff witness alpha=t (m,n)=(1,1)", ("t + 2", 1, (1, 1)) in got, f"places: {got}"))
    res = ff_search_witnesses(phi, t, 0, 2)
    checks.append(_check("ff witness alpha=t (m,n)=(0,2)", not len(res) and res.reason is not None, f"empty: {res.reason}"))
    return checks


COUNTEREXAMPLE_ALPHAS = ["1", "2", "3", "1/2", "-1/3"]


def fixture_counterexamples(workers=None, p_max: int = 10**5) -> list[dict]:
    checks = []
    phi = parse_map("x+x^2", QQ)
    found = []
    tested = []
    for s in COUNTEREXAMPLE_ALPHAS:
        alpha = parse_point(s, QQ)
        for m in range(3):
            try:
                res = search_witnesses(phi, alpha, m, 1, p_max, workers=workers)
            except PreperiodicPointError:
                continue
            tested.append(f"{s}/m={m}")
            found += [(s, m, p) for p in res.primes()]
    checks.append(_check(f"x+x^2 n=1 no witnesses p<={p_max}", not found and tested, f"{len(tested)} searches, witnesses {found}"))
    v = a2_verdict(phi, 1)
    checks.append(_check("x+x^2 A2 n=1", v.status is Status.NO, f"{v.status.value} ({v.reason})"))
    psi = parse_map("(x-1)(x-2)^2", QQ)
    v = a1_verdict(psi, parse_point("1", QQ), 1)
    checks.append(_check("(x-1)(x-2)^2 A1 alpha=1 m=1", v.status is Status.NO, f"{v.status.value} ({v.reason})"))
    return checks


FIXTURES = {
    "nf-x2p1": fixture_nf_x2p1,
    "ff-x2pt": fixture_ff_x2pt,
    "counterexamples": fixture_counterexamples,
}


def run_fixture(name: str, workers=None) -> dict:
    checks = FIXTURES[name](workers=workers)
    passed = all(c["passed"] for c in checks if not c.get("informational"))
    return {"kind": "verify", "example": name, "checks": checks, "passed": passed}
