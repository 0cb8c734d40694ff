"""JSON encodings of field elements, polynomials and maps."""

from __future__ import annotations

from fractions import Fraction

from .base_rings import QQ, QQt, Poly, RatFunc
from .dynamics import RationalMap

SCHEMA_VERSION = 1


def _q(c) -> str:
    return str(Fraction(c))


def _qpoly(f: Poly) -> list[str]:
    return [_q(c) for c in f.coeffs]


def field_elem_to_json(c, base):
    if base is QQt:
        c = QQt.to_field(c)
        return {"num": _qpoly(c.num), "den": _qpoly(c.den)}
    return _q(c)


def field_elem_from_json(data, base):
    if base is QQt:
        num = Poly(Fraction(s) for s in data["num"])
        den = Poly(Fraction(s) for s in data["den"])
        return RatFunc(num, den)
    return Fraction(data)


def poly_to_json(f: Poly, base) -> list:
    return [field_elem_to_json(c, base) for c in f.coeffs]


def poly_from_json(data: list, base) -> Poly:
    return Poly(field_elem_from_json(c, base) for c in data)


def base_from_name(name: str):
    if name == "nf":
        return QQ
    if name == "ff":
        return QQt
    raise ValueError(f"unknown base {name!r}")


def map_to_json(phi: RationalMap) -> dict:
    base = phi.base
    if base is QQ:
        F = [str(c) for c in phi.F]
        G = [str(c) for c in phi.G]
    else:
        F = [_qpoly(c) for c in phi.F]
        G = [_qpoly(c) for c in phi.G]
    return {"base": base.name, "degree": phi.degree, "F": F, "G": G, "text": phi.to_str()}


def map_from_json(data: dict) -> RationalMap:
    base = base_from_name(data["base"])
    if base is QQ:
        F = tuple(int(c) for c in data["F"])
        G = tuple(int(c) for c in data["G"])
    else:
        F = tuple(Poly(Fraction(s) for s in c) for c in data["F"])
        G = tuple(Poly(Fraction(s) for s in c) for c in data["G"])
    return RationalMap(F, G, int(data["degree"]), base)
