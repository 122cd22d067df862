"""Parsing of polynomial literals in the canonical text syntax.

Grammar (whitespace ignored, `*` optional between factors):

    sum      := ['-'] product (('+' | '-') product)*
    product  := factor ( '*'? factor )*
    factor   := NUMBER ['/' NUMBER]
              | 'x' ['^' exponent]      (nonnegative integer exponent)
              | 't' ['^' exponent]      (integer or rational exponent)
              | '(' sum ')' ['^' exponent]
    exponent := ['-'] NUMBER ['/' NUMBER] | '(' ['-'] NUMBER ['/' NUMBER] ')'

Variable names are case-sensitive; `t` exists only over fields that carry it.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .basefield import (
    Field,
    hahn_field,
    padic_rationals,
    prime_field,
    rational_functions,
)
from .errors import KeypolyError, ParseError
from . import poly as P

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)|([()^*/+-]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {text[pos:]!r}")
        if m.group(1):
            tokens.append(("num", m.group(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, field: Field):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.field = field
        self.text = text

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op: str):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> P.Poly:
        out = self.sum()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return out

    def sum(self) -> P.Poly:
        kind, val = self.peek()
        negate = kind == "op" and val == "-"
        if negate:
            self.take()
        acc = self.product()
        if negate:
            acc = -acc
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                term = self.product()
                acc = acc + term if val == "+" else acc - term
            else:
                return acc

    def product(self) -> P.Poly:
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                acc = acc * self.factor()
            else:
                return acc

    def number(self) -> Fraction:
        kind, val = self.take()
        if kind != "num":
            raise ParseError(f"expected a number in {self.text!r}")
        num = int(val)
        kind, nxt = self.peek()
        if kind == "op" and nxt == "/":
            self.take()
            kind, den = self.take()
            if kind != "num":
                raise ParseError(f"expected a denominator in {self.text!r}")
            return Fraction(num, int(den))
        return Fraction(num)

    def exponent(self) -> Fraction:
        kind, val = self.peek()
        if kind == "op" and val == "(":
            self.take()
            e = self._signed_number()
            self.expect(")")
            return e
        return self._signed_number()

    def _signed_number(self) -> Fraction:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val == "-":
            self.take()
            sign = -1
        return sign * self.number()

    def factor(self) -> P.Poly:
        kind, val = self.peek()
        try:
            if kind == "num":
                return P.constant(self.field, self.field.from_fraction(self.number()))
            if kind == "name":
                self.take()
                if val == "x":
                    e = self._int_exponent_or_one()
                    return P.monomial(self.field, e)
                if val == "t":
                    e = Fraction(1)
                    k, nxt = self.peek()
                    if k == "op" and nxt == "^":
                        self.take()
                        e = self.exponent()
                    return P.constant(self.field, self.field.t_power(e))
                raise ParseError(f"unknown variable {val!r} (variables are x, t)")
            if kind == "op" and val == "(":
                self.take()
                inner = self.sum()
                self.expect(")")
                k, nxt = self.peek()
                if k == "op" and nxt == "^":
                    self.take()
                    e = self.exponent()
                    if e.denominator != 1 or e < 0:
                        raise ParseError("group exponent must be a nonnegative integer")
                    return inner ** int(e)
                return inner
        except ParseError:
            raise
        except KeypolyError as exc:
            raise ParseError(f"{type(exc).__name__}: {exc}") from exc
        raise ParseError(f"unexpected token in {self.text!r}")

    def _int_exponent_or_one(self) -> int:
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            e = self.exponent()
            if e.denominator != 1 or e < 0:
                raise ParseError("x exponent must be a nonnegative integer")
            return int(e)
        return 1


def parse_poly(text: str, field: Field) -> P.Poly:
    return _Parser(text, field).parse()


_FIELD_NAME = re.compile(r"^(Q|F(\d+)t?|H(\d+))$")


def field_from_name(name: str, p: int | None = None) -> Field:
    """Resolve a short field name: Q (p-adic rationals, default p = 2),
    F<p> (prime field), F<p>t (rational functions), H<p> (series)."""
    m = _FIELD_NAME.match(name.strip())
    if not m:
        raise ParseError(f"unknown field name {name!r} (use Q, F<p>, F<p>t, H<p>)")
    try:
        if name == "Q":
            return padic_rationals(p or 2)
        if m.group(3):
            return hahn_field(int(m.group(3)))
        q = int(m.group(2))
        return rational_functions(q) if name.endswith("t") else prime_field(q)
    except KeypolyError as exc:
        raise ParseError(f"{type(exc).__name__}: {exc}") from exc
