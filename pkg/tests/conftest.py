import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from dynaport.base_rings import QQ, QQt, Poly, RatFunc
from dynaport.cli.expr import parse_map, parse_point
from dynaport.dynamics import ProjPoint

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

T = Poly((0, 1))  # t, when used as a Q(t) coefficient


def poly(*coeffs):
    """Ascending coefficients."""
    return Poly(Fraction(c) for c in coeffs)


def nf(text):
    return parse_map(text, QQ)


def ff(text):
    return parse_map(text, QQt)


def pt(value, base=QQ):
    if isinstance(value, str):
        return parse_point(value, base)
    return ProjPoint.from_value(Fraction(value), base)


def tpt(text):
    return parse_point(text, QQt)


def rf(num, den=None):
    return RatFunc(num, den)


FIXTURE_MAPS = ["x^2", "x^2+1", "x^2-2", "(x^2-1)/x"]


@pytest.fixture(scope="session")
def x2p1():
    return nf("x^2+1")


@pytest.fixture(scope="session")
def x2pt():
    return ff("x^2+t")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
