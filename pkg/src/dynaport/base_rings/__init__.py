"""Exact arithmetic: polynomials, quotient fields, residue rings, factoring."""

from .factor import DEFAULT_FACTOR_CAP, FactorCapError, factor_rational_poly, irreducible_factors, is_irreducible
from .fields import QElt, QuotField, RatFunc, ResidueRing
from .poly import (
    ONE,
    X,
    Poly,
    content_and_primitive,
    fdiv,
    interpolate,
    is_squarefree,
    poly_gcd,
    poly_lcm,
    poly_xgcd,
    resultant,
    squarefree_decompose,
    squarefree_part,
)
from .qt_factor import factor_over_qt

__all__ = [
    "DEFAULT_FACTOR_CAP",
    "FactorCapError",
    "ONE",
    "Poly",
    "QElt",
    "QuotField",
    "RatFunc",
    "ResidueRing",
    "X",
    "content_and_primitive",
    "factor_over_qt",
    "factor_rational_poly",
    "fdiv",
    "interpolate",
    "irreducible_factors",
    "is_irreducible",
    "is_squarefree",
    "poly_gcd",
    "poly_lcm",
    "poly_xgcd",
    "resultant",
    "squarefree_decompose",
    "squarefree_part",
]

from .bases import QQ, QQt, FunctionFieldBase, NumberFieldBase  # noqa: E402

__all__ += ["QQ", "QQt", "FunctionFieldBase", "NumberFieldBase"]
