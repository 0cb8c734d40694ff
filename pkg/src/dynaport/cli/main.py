"""``dynaport`` command line: argument parsing, dispatch and exit codes.

Exit codes: 0 success, 2 usage or input error, 3 a cap limited the result
(the partial report is still printed), 1 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from ..base_rings import FactorCapError
from ..dynamics import CapError
from ..heights import PrecisionError
from .commands import COMMANDS, RunConfig
from .expr import ParseError
from .fixtures import FIXTURES
from .report import emit_report

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2, 3

log = logging.getLogger("dynaport")


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynaport", description="Squarefree portraits and admissible indices for rational maps.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "--format", dest="output", choices=["json", "table"], default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    mapped = argparse.ArgumentParser(add_help=False, parents=[common])
    mapped.add_argument("--map", required=True, help='e.g. "x^2+1", "(x^2-1)/x", "x^2+t"')
    mapped.add_argument("--base", choices=["nf", "ff"], help="default: ff if the map mentions t")
    mapped.add_argument("--alpha", required=True)

    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("portrait", parents=[mapped], help="portrait of alpha modulo a prime or place")
    p.add_argument("--prime", type=int)
    p.add_argument("--place", help="monic irreducible polynomial in t (maps over Q(t))")
    p.add_argument("--step-cap", type=_positive, default=64)

    p = sub.add_parser("search", parents=[mapped], help="primes giving a squarefree portrait (m,n)")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--pmax", "--p-max", dest="p_max", type=_positive, default=1000)
    p.add_argument("--workers", type=_positive)

    p = sub.add_parser("admissible", parents=[mapped], help="A1 x A2 verdict grid")
    p.add_argument("--max-m", type=_nonneg, default=6)
    p.add_argument("--max-n", type=_positive, default=6)
    p.add_argument("--method", choices=["auto", "fast", "slow"], default="auto")
    p.add_argument("--depth-cap", type=_positive)
    p.add_argument("--orbit-cap", type=_positive, default=48)
    p.add_argument("--dynatomic-cap", type=_positive, default=8)

    p = sub.add_parser("height", parents=[mapped], help="Weil and canonical heights of alpha")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--bit-cap", type=_positive, default=1 << 28)
    p.add_argument("--exact", action="store_true", help="iterate in exact integers only (subject to --bit-cap)")
    p.add_argument("--tau", type=float, help="known lower bound on h-hat of non-preperiodic points; reports whether alpha falls below it")

    p = sub.add_parser("gleason", parents=[common], help="squarefreeness of phi^n(0) for x^2+t")
    p.add_argument("--n-max", type=_positive, default=10)

    p = sub.add_parser("ff-search", parents=[mapped], help="witness places over Q(t)")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--factor-cap", type=_positive, default=64)
    p.add_argument("--step-cap", type=_positive, default=64)

    p = sub.add_parser("verify", parents=[common], help="re-run the built-in examples")
    p.add_argument("--example", choices=[*FIXTURES, "all"], default="all")
    p.add_argument("--workers", type=_positive)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = set(RunConfig.__dataclass_fields__)
    kw = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    return RunConfig(**kw)


def run_command(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = config_from_args(ns)
    try:
        result = COMMANDS[cfg.command](cfg)
    except (CapError, FactorCapError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARTIAL
    except PrecisionError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARTIAL
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_INTERNAL
    partial = bool(result.pop("partial", False))
    out.write(emit_report(result, cfg.output))
    if cfg.command == "verify" and not result["passed"]:
        return EXIT_INTERNAL
    return EXIT_PARTIAL if partial else EXIT_OK


def main() -> None:
    sys.exit(run_command())
