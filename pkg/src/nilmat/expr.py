"""A small recursive-descent parser for ring expressions.

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ['^' INT]
    atom   := INT ['/' INT] | NAME | '(' expr ')'

Names are resolved by a caller-supplied callback, so the same grammar serves
polynomials, nilpotent extensions and quotient-ring elements.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Callable

from nilmat.errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z]\w*(?:\{\s*\d+\s*,\s*\d+\s*\})?)|(?P<op>[-+*/^()]))"
)


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, resolve: Callable[[str], Any], const: Callable[[Fraction], Any]):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.resolve = resolve
        self.const = const

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, value=None):
        kind, tok = self.peek()
        if kind is None or (value is not None and tok != value):
            want = value or "a token"
            raise ParseError(f"expected {want!r} at token {self.pos} in {self.text!r}")
        self.pos += 1
        return kind, tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input {self.tokens[self.pos][1]!r} in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[1] == "*":
            self.take("*")
            value = value * self.factor()
        return value

    def factor(self):
        if self.peek()[1] == "-":
            self.take("-")
            return -self.factor()
        value = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            kind, tok = self.take()
            if kind != "int":
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            exponent = int(tok)
            result = self.const(Fraction(1))
            for _ in range(exponent):
                result = result * value
            value = result
        return value

    def atom(self):
        kind, tok = self.take()
        if kind == "int":
            num = Fraction(int(tok))
            if self.peek()[1] == "/":
                self.take("/")
                kind, den = self.take()
                if kind != "int" or int(den) == 0:
                    raise ParseError(f"bad rational literal in {self.text!r}")
                num /= int(den)
            return self.const(num)
        if kind == "name":
            return self.resolve(re.sub(r"\s+", "", tok))
        if tok == "(":
            value = self.expr()
            self.take(")")
            return value
        raise ParseError(f"unexpected {tok!r} in {self.text!r}")


def parse_expression(text: str, resolve: Callable[[str], Any], const: Callable[[Fraction], Any]):
    """Parse ``text`` using ``resolve(name)`` for variables and ``const(q)`` for literals."""
    return _Parser(text, resolve, const).parse()


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
