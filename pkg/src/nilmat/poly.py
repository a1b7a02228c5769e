"""Exact multivariate polynomials over the rationals.

Variables come in three families, ordered ``a_r < X_ij < u_k``:

* parameters ``a1, a2, ...`` (free coefficients, never reduced),
* matrix variables ``X11, X12, ...`` (``X{i,j}`` once an index exceeds 9),
* input variables ``u1, u2, ...`` used only for the components of polynomial maps.

A monomial is a sorted tuple of variables with repetition, so ``X11^2*X22`` is
``(X11, X11, X22)``.  A polynomial maps monomials to nonzero ``Fraction``
coefficients; the zero polynomial has no terms.
"""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

from nilmat.errors import ParseError
from nilmat.expr import format_fraction, parse_expression

PARAM, MATRIX, INPUT = 0, 1, 2


class Var(NamedTuple):
    family: int
    i: int
    j: int = 0

    def __str__(self) -> str:
        if self.family == MATRIX:
            if self.i < 10 and self.j < 10:
                return f"X{self.i}{self.j}"
            return f"X{{{self.i},{self.j}}}"
        return ("a" if self.family == PARAM else "u") + str(self.i)


def X(i: int, j: int) -> Var:
    return Var(MATRIX, i, j)


def a(r: int) -> Var:
    return Var(PARAM, r)


def u(k: int) -> Var:
    return Var(INPUT, k)


Monomial = tuple  # sorted tuple[Var, ...], repeated entries encode exponents
ONE: Monomial = ()

Scalar = Union[int, Fraction]


def mono_mul(p: Monomial, q: Monomial) -> Monomial:
    if not p:
        return q
    if not q:
        return p
    return tuple(sorted(p + q))


def exponents(mono: Monomial) -> dict[Var, int]:
    """The monomial as a variable -> exponent map."""
    return dict(Counter(mono))


def x_degree(mono: Monomial) -> int:
    return sum(1 for v in mono if v.family == MATRIX)


def x_part(mono: Monomial) -> Monomial:
    return tuple(v for v in mono if v.family == MATRIX)


def non_x_part(mono: Monomial) -> Monomial:
    return tuple(v for v in mono if v.family != MATRIX)


def format_monomial(mono: Monomial) -> str:
    return "*".join(
        str(v) if e == 1 else f"{v}^{e}" for v, e in sorted(Counter(mono).items())
    )


class Polynomial:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = Fraction(coeff)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "Polynomial":
        # terms must already be free of zero coefficients
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def var(cls, v: Var) -> "Polynomial":
        return cls._raw({(v,): Fraction(1)})

    @classmethod
    def monomial(cls, mono: Iterable[Var], coeff: Scalar = 1) -> "Polynomial":
        return cls({tuple(sorted(mono)): coeff})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        if isinstance(other, Var):
            return Polynomial.var(other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial()
        return Polynomial._raw({m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(1)
        for _ in range(e):
            result = result * self
        return result

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=-1)

    def x_degree(self) -> int:
        return max((x_degree(m) for m in self._terms), default=-1)

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def variables(self) -> set[Var]:
        return {v for m in self._terms for v in m}

    def graded_piece(self, d: int) -> "Polynomial":
        return graded_piece(self, d)

    def split_by_non_x(self) -> dict[Monomial, "Polynomial"]:
        """Group terms by their parameter/input part: ``{a-monomial: X-polynomial}``."""
        groups: dict[Monomial, dict[Monomial, Fraction]] = {}
        for mono, c in self._terms.items():
            groups.setdefault(non_x_part(mono), {})[x_part(mono)] = c
        return {k: Polynomial._raw(v) for k, v in groups.items()}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: (x_degree(t[0]), len(t[0]), t[0]))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for idx, (mono, c) in enumerate(self.sorted_terms()):
            mag = abs(c)
            if not mono:
                body = format_fraction(mag)
            elif mag == 1:
                body = format_monomial(mono)
            else:
                body = f"{format_fraction(mag)}*{format_monomial(mono)}"
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)


def graded_piece(p: Polynomial, d: int) -> Polynomial:
    """Terms of ``p`` whose X-degree is exactly ``d``; parameters count as degree 0."""
    return Polynomial._raw({m: c for m, c in p.terms.items() if x_degree(m) == d})


def poly_arith(p: Polynomial, q: Polynomial | None, op: str, c: Scalar | None = None) -> Polynomial:
    """Dispatch ``op`` in {add, mul, neg, scale}; kept for scripted use."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "neg":
        return -p
    if op == "scale":
        return p.scale(c)
    raise ValueError(f"unknown op {op!r}")


def matrix_vars(m: int, n: int) -> list[Var]:
    return [X(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]


def monomials_of_xdegree(m: int, n: int, d: int) -> list[Monomial]:
    """All monomials of degree ``d`` in the ``m*n`` matrix variables, in sorted order."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    return list(combinations_with_replacement(matrix_vars(m, n), d))


def count_monomials(m: int, n: int, d: int) -> int:
    return comb(m * n + d - 1, d)


_NAME = re.compile(r"^(?:X(\d)(\d)|X\{(\d+),(\d+)\}|a(\d+)|u(\d+))$")


def parse_variable(name: str) -> Var:
    match = _NAME.match(name)
    if match is None:
        raise ParseError(f"unknown variable {name!r}")
    g = match.groups()
    if g[0] is not None:
        v = X(int(g[0]), int(g[1]))
    elif g[2] is not None:
        v = X(int(g[2]), int(g[3]))
    elif g[4] is not None:
        v = a(int(g[4]))
    else:
        v = u(int(g[5]))
    if v.i < 1 or (v.family == MATRIX and v.j < 1):
        raise ParseError(f"indices start at 1: {name!r}")
    return v


def parse_polynomial(text: str) -> Polynomial:
    return parse_expression(
        text, lambda name: Polynomial.var(parse_variable(name)), Polynomial.const
    )


def iter_monomial_vars(p: Polynomial) -> Iterator[Var]:
    for mono in p.terms:
        yield from mono
