"""Command line interface."""

from .commands import RunConfig
from .expr import ParseError, parse_map, parse_point, parse_t_poly
from .main import build_parser, main, run_command
from .report import emit_report

__all__ = ["ParseError", "RunConfig", "build_parser", "emit_report", "main", "parse_map", "parse_point", "parse_t_poly", "run_command"]
