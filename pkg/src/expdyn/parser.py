"""Textual map grammar: parsing and canonical printing.

    expr := "F(" c "," c ")" | "G(" c "," c ")" | "exp(" c ")"
          | "iter(" expr "," int ")" | "shift(" expr "," c ")"
          | "comp(" expr "," expr ")" | "conj(" c "," c "," expr ")"

A complex literal c is "a", "a+bi" or "a-bi" with decimal reals (optional
exponent part); the "i" suffix is the only accepted spelling, no "j".
Whitespace is insignificant.  Parsed expressions are validated before
being returned; ``format_map`` is the inverse on expression trees.
"""

from __future__ import annotations

import re

from .maps import (
    Compose,
    Conjugate,
    FamilyF,
    FamilyG,
    Iterate,
    MapExpr,
    ScaledExp,
    Shift,
    validate,
)

__all__ = ["MapSyntaxError", "parse_map", "parse_complex", "format_map", "format_complex"]

_REAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"\d+")


class MapSyntaxError(ValueError):
    """Syntax error with the byte offset where parsing failed."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, token: str) -> None:
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise MapSyntaxError(f"expected {token!r}", self.pos)
        self.pos += len(token)

    def match_keyword(self) -> str:
        self.skip_ws()
        for kw in ("iter", "shift", "comp", "conj", "exp", "F", "G"):
            if self.text.startswith(kw, self.pos):
                self.pos += len(kw)
                return kw
        raise MapSyntaxError("expected one of F, G, exp, iter, shift, comp, conj",
                             self.pos)

    def real(self) -> float:
        self.skip_ws()
        m = _REAL.match(self.text, self.pos)
        if m is None:
            raise MapSyntaxError("expected a decimal real", self.pos)
        self.pos = m.end()
        return float(m.group())

    def integer(self) -> int:
        self.skip_ws()
        m = _INT.match(self.text, self.pos)
        if m is None:
            raise MapSyntaxError("expected an integer", self.pos)
        self.pos = m.end()
        return int(m.group())

    def complex_lit(self) -> complex:
        re_part = self.real()
        save = self.pos
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            sign = -1.0 if self.text[self.pos] == "-" else 1.0
            self.pos += 1
            im_part = self.real()
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos] == "i":
                self.pos += 1
                return complex(re_part, sign * im_part)
            raise MapSyntaxError("expected 'i' after imaginary part", self.pos)
        self.pos = save
        return complex(re_part, 0.0)

    def expr(self) -> MapExpr:
        kw = self.match_keyword()
        self.expect("(")
        if kw == "F":
            lam = self.complex_lit()
            self.expect(",")
            xi = self.complex_lit()
            node: MapExpr = FamilyF(lam, xi)
        elif kw == "G":
            mu = self.complex_lit()
            self.expect(",")
            zeta = self.complex_lit()
            node = FamilyG(mu, zeta)
        elif kw == "exp":
            node = ScaledExp(self.complex_lit())
        elif kw == "iter":
            base = self.expr()
            self.expect(",")
            node = Iterate(base, self.integer())
        elif kw == "shift":
            base = self.expr()
            self.expect(",")
            node = Shift(base, self.complex_lit())
        elif kw == "comp":
            outer = self.expr()
            self.expect(",")
            node = Compose(outer, self.expr())
        else:  # conj
            a = self.complex_lit()
            self.expect(",")
            b = self.complex_lit()
            self.expect(",")
            node = Conjugate(a, b, self.expr())
        self.expect(")")
        return node


def parse_map(text: str) -> MapExpr:
    """Parse a map expression; the result is validated before return.

    Raises :class:`MapSyntaxError` (with byte offset) on bad syntax and
    :class:`expdyn.maps.InvalidMapError` on constraint violations.
    """
    sc = _Scanner(text)
    node = sc.expr()
    sc.skip_ws()
    if sc.pos != len(text):
        raise MapSyntaxError("trailing input after expression", sc.pos)
    validate(node)
    return node


def parse_complex(text: str) -> complex:
    """Parse a standalone complex literal ("a", "a+bi", "a-bi")."""
    sc = _Scanner(text)
    value = sc.complex_lit()
    sc.skip_ws()
    if sc.pos != len(text):
        raise MapSyntaxError("trailing input after complex literal", sc.pos)
    return value


def format_complex(z: complex) -> str:
    if z.imag == 0.0:
        return repr(z.real)
    if z.imag < 0.0:
        return f"{z.real!r}-{-z.imag!r}i"
    return f"{z.real!r}+{z.imag!r}i"


def format_map(expr: MapExpr) -> str:
    """Canonical text for an expression; parse_map(format_map(e)) == e."""
    if isinstance(expr, FamilyF):
        return f"F({format_complex(expr.lam)}, {format_complex(expr.xi)})"
    if isinstance(expr, FamilyG):
        return f"G({format_complex(expr.mu)}, {format_complex(expr.zeta)})"
    if isinstance(expr, ScaledExp):
        return f"exp({format_complex(expr.lam)})"
    if isinstance(expr, Iterate):
        return f"iter({format_map(expr.base)}, {expr.s})"
    if isinstance(expr, Shift):
        return f"shift({format_map(expr.base)}, {format_complex(expr.c)})"
    if isinstance(expr, Compose):
        return f"comp({format_map(expr.outer)}, {format_map(expr.inner)})"
    if isinstance(expr, Conjugate):
        return (f"conj({format_complex(expr.a)}, {format_complex(expr.b)}, "
                f"{format_map(expr.base)})")
    raise TypeError(f"not a map expression: {expr!r}")
