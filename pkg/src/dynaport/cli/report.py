"""Rendering command results as JSON or plain-text tables.

Every result is a dict with a ``kind`` key.  JSON output sorts keys, so the
same result always serializes to the same bytes.
"""

from __future__ import annotations

import json

from ..serialize import SCHEMA_VERSION


def _json(result: dict) -> str:
    body = dict(result)
    body.setdefault("schema_version", SCHEMA_VERSION)
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _fmt_portrait(p) -> str:
    return "-" if p is None else f"({p[0]},{p[1]})"


def _table_portrait(r: dict) -> list[str]:
    where = f"p={r['prime']}" if "prime" in r else f"place={r['place']}"
    if r["m"] is None:
        note = "escape certified" if r.get("escape_certified") else "step cap reached"
        return [f"{where} portrait=none ({note})"]
    return [f"{where} portrait=({r['m']},{r['n']})"]


def _table_witnesses(r: dict) -> list[str]:
    lines = [f"map={r['map']} alpha={r['alpha']} (m,n)=({r['m']},{r['n']}) p_max={r['p_max']}"]
    rows = [("prime", "portrait", "ord", "check")]
    for w in r["witnesses"]:
        v = w["verification"]
        rows.append((str(w["prime"]), _fmt_portrait(w["portrait"]), str(v["ord"]), v["method"]))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    for row in rows:
        lines.append("  ".join(c.rjust(widths[i]) for i, c in enumerate(row)).rstrip())
    lines.append(f"{len(r['witnesses'])} witness(es), {len(r['skipped'])} skipped")
    return lines


def _table_ff_witnesses(r: dict) -> list[str]:
    lines = [f"map={r['map']} alpha={r['alpha']} (m,n)=({r['m']},{r['n']})"]
    for w in r["witnesses"]:
        lines.append(f"  place={w['place']} deg={w['degree']} ord={w['valuation']} portrait={_fmt_portrait(w['portrait'])}")
    tail = f"{len(r['witnesses'])} witness place(s)"
    if r.get("reason"):
        tail += f"; {r['reason']}"
    if not r["complete"]:
        tail += "; factorization incomplete"
    lines.append(tail)
    return lines


def _table_admissible(r: dict) -> list[str]:
    grid = r["grid"]
    max_n = len(grid[0]) if grid else 0
    w = max(2, len(str(len(grid) - 1)))
    lines = [f"map={r['map']} alpha={r['alpha']}", "m\\n".ljust(w + 2) + " ".join(str(n).rjust(2) for n in range(1, max_n + 1))]
    for m, row in enumerate(grid):
        lines.append(str(m).ljust(w + 2) + " ".join(c.rjust(2) for c in row))
    s = r["summary"]
    cof = "cofinite" if not s["unknown"] else "undetermined"
    lines.append(
        f"summary: yes={s['yes']} no={s['no']} unknown={s['unknown']} "
        f"A1 excludes {s['a1_excluded']} A2 excludes {s['a2_excluded']} ({cof} within range)"
    )
    return lines


def _table_height(r: dict) -> list[str]:
    lines = [f"map={r['map']} alpha={r['alpha']}", f"weil_height={r['weil_height']!r}"]
    c = r["canonical_height"]
    lines.append(f"canonical_height={c['value']!r} +/- {c['error_bound']!r} (N={c['iterations']})")
    if c.get("partial"):
        lines.append("canonical height is a partial estimate (cap hit)")
    g = r["gap"]
    lines.append(f"C_up={g['C_up']!r} C_low={g['C_low']!r} escape_threshold={r['escape_threshold']!r}")
    lines.append(f"preperiodic={str(r['preperiodic']).lower()}")
    return lines


def _table_gleason(r: dict) -> list[str]:
    return [f"n={row['n']} squarefree={str(row['squarefree']).lower()}" for row in r["results"]]


def _table_verify(r: dict) -> list[str]:
    lines = []
    for c in r["checks"]:
        tag = "PASS" if c["passed"] else ("INFO" if c.get("informational") else "FAIL")
        lines.append(f"{tag} {c['name']}: {c['detail']}")
    n_pass = sum(c["passed"] for c in r["checks"])
    n_checked = sum(not c.get("informational") for c in r["checks"])
    lines.append(f"{'PASS' if r['passed'] else 'FAIL'} {r['example']}: {n_pass}/{n_checked} checks")
    return lines


_TABLES = {
    "portrait": _table_portrait,
    "witnesses": _table_witnesses,
    "ff_witnesses": _table_ff_witnesses,
    "admissible": _table_admissible,
    "height": _table_height,
    "gleason": _table_gleason,
    "verify": _table_verify,
}


def emit_report(result: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return _json(result)
    if fmt == "table":
        if result.get("kind") == "verify_all":
            return "".join(emit_report(r, "table") for r in result["examples"])
        return "\n".join(_TABLES[result["kind"]](result)) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


__all__ = ["emit_report"]
