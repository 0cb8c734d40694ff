"""Recursive-descent parser for map and point expressions.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary | <juxtaposed> power)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := NUMBER | 'x' | 't' | '(' expr ')'

NUMBER is an integer or a decimal.  Juxtaposition means multiplication when
the next token is a variable or '(' (so ``2x^2`` and ``(x+1)(x-1)`` parse).
Values are rational functions in x whose coefficients live in Q(t).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..base_rings import QQ, QQt, Poly, RatFunc, poly_gcd
from ..dynamics import ProjPoint, RationalMap, normalize_map

MAX_EXPONENT = 4096


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"parse error at column {pos + 1}: {message}\n  {text}\n  {' ' * pos}^")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        mt = _TOKEN.match(text, i)
        if not mt or mt.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", text, i)
        kind = mt.lastgroup
        start = mt.start(kind)
        out.append(_Tok(kind, mt.group(kind), start))
        i = mt.end()
    out.append(_Tok("end", "", len(text)))
    return out


def _rf(c) -> RatFunc:
    return QQt.to_field(c)


class _Val:
    """num/den with num, den polynomials in x over Q(t)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        self.num = num
        self.den = den if den is not None else Poly((_rf(1),))

    @classmethod
    def const(cls, c) -> "_Val":
        return cls(Poly((_rf(c),)))

    def __add__(self, o):
        return _Val(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return _Val(self.num * o.den - o.num * self.den, self.den * o.den)

    def __neg__(self):
        return _Val(-self.num, self.den)

    def __mul__(self, o):
        return _Val(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        if o.num.is_zero():
            raise ZeroDivisionError
        v = _Val(self.num * o.den, self.den * o.num)
        g = poly_gcd(v.num, v.den) if not v.num.is_zero() else v.den
        if g.degree > 0:
            v = _Val(v.num.exact_div(g), v.den.exact_div(g))
        return v

    def __pow__(self, e: int):
        if e < 0:
            if self.num.is_zero():
                raise ZeroDivisionError
            return _Val(self.den**-e, self.num**-e)
        return _Val(self.num**e, self.den**e)


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = variables
        self.seen: set[str] = set()

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def _fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.cur
        raise ParseError(msg, self.text, tok.pos)

    def _take(self, text: str | None = None) -> _Tok:
        tok = self.cur
        if text is not None and tok.text != text:
            self._fail(f"expected {text!r}" + (f", found {tok.text!r}" if tok.text else ", found end of input"))
        self.i += 1
        return tok

    def parse(self) -> _Val:
        if self.cur.kind == "end":
            self._fail("empty expression")
        v = self.expr()
        if self.cur.kind != "end":
            self._fail(f"unexpected {self.cur.text!r}")
        return v

    def expr(self) -> _Val:
        v = self.term()
        while self.cur.text in ("+", "-"):
            op = self._take().text
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> _Val:
        v = self.unary()
        while True:
            tok = self.cur
            if tok.text in ("*", "/"):
                self._take()
                w = self.unary()
                if tok.text == "*":
                    v = v * w
                else:
                    try:
                        v = v / w
                    except ZeroDivisionError:
                        self._fail("division by zero", tok)
            elif tok.kind == "name" or tok.text == "(":
                v = v * self.power()
            else:
                return v

    def unary(self) -> _Val:
        if self.cur.text == "-":
            self._take()
            return -self.unary()
        if self.cur.text == "+":
            self._take()
            return self.unary()
        return self.power()

    def power(self) -> _Val:
        base = self.atom()
        if self.cur.text != "^":
            return base
        self._take()
        sign = 1
        paren = False
        if self.cur.text == "(":
            paren = True
            self._take()
        if self.cur.text == "-":
            self._take()
            sign = -1
        tok = self.cur
        if tok.kind != "num" or not tok.text.isdigit():
            self._fail("exponent must be an integer")
        self._take()
        if paren:
            self._take(")")
        e = sign * int(tok.text)
        if abs(e) > MAX_EXPONENT:
            self._fail(f"exponent {e} exceeds {MAX_EXPONENT}", tok)
        try:
            return base**e
        except ZeroDivisionError:
            self._fail("zero to a negative power", tok)

    def atom(self) -> _Val:
        tok = self.cur
        if tok.kind == "num":
            self._take()
            return _Val.const(Fraction(tok.text))
        if tok.kind == "name":
            if tok.text not in self.variables:
                allowed = ", ".join(repr(v) for v in self.variables) or "none"
                self._fail(f"unknown name {tok.text!r} (allowed: {allowed})")
            self._take()
            self.seen.add(tok.text)
            if tok.text == "x":
                return _Val(Poly((_rf(0), _rf(1))))
            return _Val.const(RatFunc(Poly((0, 1))))
        if tok.text == "(":
            self._take()
            v = self.expr()
            self._take(")")
            return v
        if tok.kind == "end":
            self._fail("unexpected end of input")
        self._fail(f"unexpected {tok.text!r}")


def parse_expression(text: str, variables: tuple[str, ...] = ("x", "t")):
    """Parse to (num, den) polynomials in x over Q(t), plus the names used."""
    p = _Parser(text, variables)
    v = p.parse()
    return v.num, v.den, p.seen


def _to_nf_poly(f: Poly) -> Poly:
    # no t was allowed, so every coefficient is a constant of Q(t)
    return Poly(Fraction(QQt.to_field(c).num[0]) for c in f.coeffs)


def detect_base(text: str):
    try:
        _, _, seen = parse_expression(text)
    except ParseError:
        return QQ
    return QQt if "t" in seen else QQ


def parse_map(text: str, base=None) -> RationalMap:
    if base is None:
        base = detect_base(text)
    variables = ("x", "t") if base is QQt else ("x",)
    num, den, _ = parse_expression(text, variables)
    if base is QQ:
        num, den = _to_nf_poly(num), _to_nf_poly(den)
    return normalize_map(num, den, base)


_INF_NAMES = {"inf", "infinity", "oo"}


def parse_point(text: str, base=QQ) -> ProjPoint:
    if text.strip().lower() in _INF_NAMES:
        return ProjPoint.infinity(base)
    variables = ("t",) if base is QQt else ()
    num, den, _ = parse_expression(text, variables)
    c = _rf(num[0]) / _rf(den[0])
    if base is QQ:
        return ProjPoint.from_value(Fraction(c.num[0]), QQ)
    return ProjPoint.from_value(c, QQt)


def parse_t_poly(text: str) -> Poly:
    """A polynomial in t with rational coefficients (e.g. a place)."""
    num, den, _ = parse_expression(text, ("t",))
    c = _rf(num[0]) / _rf(den[0])
    if c.den.degree > 0:
        raise ParseError("expected a polynomial in t", text, 0)
    return c.num


__all__ = ["ParseError", "detect_base", "parse_expression", "parse_map", "parse_point", "parse_t_poly"]
