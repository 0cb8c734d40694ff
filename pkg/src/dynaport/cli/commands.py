"""Command bodies.  Each returns a result dict ready for :func:`emit_report`."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..admissible import DEFAULT_ORBIT_CAP, Status, admissible_table
from ..base_rings import QQ, QQt
from ..funcfield import FFPlace, distinct_factor_count, ff_place_orbit, ff_search_witnesses, gleason_polys
from ..heights import (
    DEFAULT_BIT_CAP,
    PrecisionError,
    canonical_height,
    escape_threshold,
    height_gap_constant,
    is_preperiodic,
    weil_height,
)
from ..portraits import portrait_mod_p, search_witnesses
from .expr import parse_map, parse_point, parse_t_poly


@dataclass
class RunConfig:
    command: str
    map: str | None = None
    base: str | None = None  # "nf", "ff" or None for auto-detect
    alpha: str | None = None
    m: int | None = None
    n: int | None = None
    prime: int | None = None
    place: str | None = None
    p_max: int = 1000
    max_m: int = 6
    max_n: int = 6
    n_max: int = 10
    tol: float = 1e-8
    method: str = "auto"
    depth_cap: int | None = None
    orbit_cap: int = DEFAULT_ORBIT_CAP
    dynatomic_cap: int = 8
    factor_cap: int = 64
    step_cap: int = 64
    bit_cap: int = DEFAULT_BIT_CAP
    exact: bool = False
    tau: float | None = None  # caller-supplied lower bound on h-hat for non-preperiodic points
    workers: int | None = None
    example: str = "all"
    output: str = "json"
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def base_obj(self):
        if self.base == "nf":
            return QQ
        if self.base == "ff":
            return QQt
        return None


def _inputs(cfg: RunConfig, need_alpha: bool = True):
    phi = parse_map(cfg.map, cfg.base_obj())
    alpha = parse_point(cfg.alpha, phi.base) if need_alpha else None
    return phi, alpha


def _head(kind: str, phi, alpha=None) -> dict:
    out = {"kind": kind, "base": phi.base.name, "map": phi.to_str()}
    if alpha is not None:
        out["alpha"] = str(alpha)
    return out


def cmd_portrait(cfg: RunConfig) -> dict:
    phi, alpha = _inputs(cfg)
    out = _head("portrait", phi, alpha)
    if phi.base is QQ:
        if cfg.prime is None:
            raise ValueError("portrait over Q needs --prime")
        p = portrait_mod_p(phi, alpha, cfg.prime)
        out.update(prime=cfg.prime, m=p.m, n=p.n)
        return out
    if cfg.place is None:
        raise ValueError("portrait over Q(t) needs --place")
    place = FFPlace.finite(parse_t_poly(cfg.place).monic())
    orb = ff_place_orbit(phi, alpha, place, cfg.step_cap)
    out.update(
        place=str(place),
        m=None if orb.portrait is None else orb.portrait.m,
        n=None if orb.portrait is None else orb.portrait.n,
        escape_certified=orb.escape_certified,
    )
    out["partial"] = orb.portrait is None and not orb.escape_certified
    return out


def cmd_search(cfg: RunConfig) -> dict:
    phi, alpha = _inputs(cfg)
    if phi.base is not QQ:
        raise ValueError("search runs over Q; use ff-search for maps over Q(t)")
    res = search_witnesses(phi, alpha, cfg.m, cfg.n, cfg.p_max, workers=cfg.workers)
    out = _head("witnesses", phi, alpha)
    out.update(
        m=cfg.m,
        n=cfg.n,
        p_max=cfg.p_max,
        witnesses=[
            {"prime": w.prime, "portrait": [w.portrait.m, w.portrait.n], "squarefree": w.squarefree, "verification": w.verification}
            for w in res.witnesses
        ],
        skipped=[{"prime": p, "reason": r} for p, r in res.skipped],
    )
    return out


def cmd_ff_search(cfg: RunConfig) -> dict:
    cfg.base = cfg.base or "ff"
    phi, alpha = _inputs(cfg)
    res = ff_search_witnesses(phi, alpha, cfg.m, cfg.n, factor_cap=cfg.factor_cap, step_cap=cfg.step_cap)
    out = _head("ff_witnesses", phi, alpha)
    out.update(
        m=cfg.m,
        n=cfg.n,
        witnesses=[
            {
                "place": str(w.place),
                "degree": w.place.weight,
                "valuation": w.valuation,
                "portrait": [w.portrait.m, w.portrait.n],
                "verification": w.verification,
            }
            for w in res.witnesses
        ],
        skipped=[{"place": p, "reason": r} for p, r in res.skipped],
        complete=res.complete,
        reason=res.reason,
    )
    out["partial"] = not res.complete
    return out


def admissible_result(phi, alpha, max_m: int, max_n: int, **caps) -> dict:
    table = admissible_table(phi, alpha, max_m, max_n, **caps)
    out = _head("admissible", phi, alpha)
    out.update(
        max_m=max_m,
        max_n=max_n,
        a1=[dict(m=m, **v.to_json(phi)) for m, v in enumerate(table.a1)],
        a2=[dict(n=n, **v.to_json(phi)) for n, v in enumerate(table.a2, start=1)],
        grid=[[{Status.YES: "Y", Status.NO: "N", Status.UNKNOWN: "?"}[table.cell(m, n)] for n in range(1, max_n + 1)] for m in range(max_m + 1)],
        summary=table.summary(),
    )
    out["partial"] = any(v.bound_hit for v in table.a1 + table.a2)
    return out


def cmd_admissible(cfg: RunConfig) -> dict:
    phi, alpha = _inputs(cfg)
    return admissible_result(
        phi,
        alpha,
        cfg.max_m,
        cfg.max_n,
        method=cfg.method,
        depth_cap=cfg.depth_cap,
        orbit_cap=cfg.orbit_cap,
        dynatomic_cap=cfg.dynatomic_cap,
    )


def cmd_height(cfg: RunConfig) -> dict:
    phi, alpha = _inputs(cfg)
    gap = height_gap_constant(phi)
    partial = False
    try:
        est = canonical_height(phi, alpha, cfg.tol, cfg.bit_cap, exact_only=cfg.exact)
    except PrecisionError as exc:
        est, partial = exc.partial, True
    out = _head("height", phi, alpha)
    out.update(
        weil_height=weil_height(alpha),
        canonical_height={"value": est.value, "error_bound": est.error_bound, "iterations": est.iterations, "partial": partial},
        gap={"C_map": gap.C_map, "C_up": gap.C_up, "C_low": gap.C_low},
        escape_threshold=escape_threshold(phi),
        preperiodic=is_preperiodic(phi, alpha),
        tol=cfg.tol,
    )
    if cfg.tau is not None:
        # nothing here computes such a bound; the caller vouches for tau
        out["tau"] = {"value": cfg.tau, "below": est.value + est.error_bound < cfg.tau}
    out["partial"] = partial
    return out


def gleason_result(n_max: int) -> dict:
    from ..base_rings import is_squarefree

    rows = []
    for n, g in enumerate(gleason_polys(n_max), start=1):
        rows.append({"n": n, "squarefree": is_squarefree(g), "degree": g.degree, "distinct_roots": distinct_factor_count(g)})
    return {"kind": "gleason", "map": "x^2 + t", "alpha": "0", "n_max": n_max, "results": rows}


def cmd_gleason(cfg: RunConfig) -> dict:
    if cfg.n_max < 1:
        raise ValueError("--n-max must be >= 1")
    return gleason_result(cfg.n_max)


def cmd_verify(cfg: RunConfig) -> dict:
    from .fixtures import FIXTURES, run_fixture

    names = list(FIXTURES) if cfg.example == "all" else [cfg.example]
    for name in names:
        if name not in FIXTURES:
            raise ValueError(f"unknown example {name!r}; choose from {', '.join(FIXTURES)} or all")
    results = [run_fixture(name, workers=cfg.workers) for name in names]
    if len(results) == 1:
        return results[0]
    return {"kind": "verify_all", "examples": results, "passed": all(r["passed"] for r in results)}


COMMANDS = {
    "portrait": cmd_portrait,
    "search": cmd_search,
    "admissible": cmd_admissible,
    "height": cmd_height,
    "gleason": cmd_gleason,
    "ff-search": cmd_ff_search,
    "verify": cmd_verify,
}
