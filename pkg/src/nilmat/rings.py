"""Concrete commutative rings with exact, canonical element payloads.

Every ring here has 2 cancellable.  Supported constructions, with their
mini-DSL spelling:

========================  ======================  ==================================
construction              DSL                     payload
========================  ======================  ==================================
rationals                 ``Q``                   ``Fraction``
integers mod odd m        ``Zmod:9``              ``int`` in ``[0, m)``
nilpotent extension       ``nil:Q:3``             ``(base, (e1 coeff, ..., ek coeff))``
generic D~(m, n) algebra  ``gdt:2:2``             rewriting normal form (``Polynomial``)
generic special algebra   ``gsp:3``               oracle remainder (``Polynomial``)
free parameters           ``params:2:gdt:2:2``    as the wrapped ring, plus ``a1..a2``
========================  ======================  ==================================

In ``nil:B:k`` the generators satisfy ``e_i * e_j = 0`` for all ``i, j``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable

from nilmat.errors import (
    EvenModulusError,
    IndexOutOfRangeError,
    NotANilpotentRingError,
    ParseError,
    RingMismatchError,
)
from nilmat.expr import format_fraction, parse_expression
from nilmat.poly import INPUT, MATRIX, PARAM, Polynomial, X, a, parse_variable
from nilmat.quotient import IdealKind, IdealSpec, check_grid, oracle_reduce, reduce_dtilde


class RingKind(enum.Enum):
    RATIONALS = "Rationals"
    INTEGERS_MOD = "IntegersMod"
    NILPOTENT_EXT = "NilpotentExt"
    GENERIC_DTILDE = "GenericDtilde"
    GENERIC_SPECIAL = "GenericSpecial"
    WITH_PARAMS = "WithParams"


@dataclass(frozen=True)
class RingSpec:
    kind: RingKind
    modulus: int = 0
    base: "RingSpec | None" = None
    k: int = 0
    m: int = 0
    n: int = 0
    params: int = 0

    @classmethod
    def rationals(cls) -> "RingSpec":
        return cls(RingKind.RATIONALS)

    @classmethod
    def integers_mod(cls, modulus: int) -> "RingSpec":
        return cls(RingKind.INTEGERS_MOD, modulus=modulus)

    @classmethod
    def nilpotent_ext(cls, base: "RingSpec", k: int) -> "RingSpec":
        return cls(RingKind.NILPOTENT_EXT, base=base, k=k)

    @classmethod
    def generic_dtilde(cls, m: int, n: int) -> "RingSpec":
        return cls(RingKind.GENERIC_DTILDE, m=m, n=n)

    @classmethod
    def generic_special(cls, n: int) -> "RingSpec":
        return cls(RingKind.GENERIC_SPECIAL, m=n, n=n)

    @classmethod
    def with_params(cls, base: "RingSpec", params: int) -> "RingSpec":
        return cls(RingKind.WITH_PARAMS, base=base, params=params)

    def __str__(self) -> str:
        kind = self.kind
        if kind is RingKind.RATIONALS:
            return "Q"
        if kind is RingKind.INTEGERS_MOD:
            return f"Zmod:{self.modulus}"
        if kind is RingKind.NILPOTENT_EXT:
            return f"nil:{self.base}:{self.k}"
        if kind is RingKind.GENERIC_DTILDE:
            return f"gdt:{self.m}:{self.n}"
        if kind is RingKind.GENERIC_SPECIAL:
            return f"gsp:{self.n}"
        return f"params:{self.params}:{self.base}"


def parse_ring_spec(text: str) -> RingSpec:
    """Parse the ring mini-DSL, e.g. ``nil:Zmod:9:3`` or ``params:2:gdt:2:2``."""
    parts = [p.strip() for p in text.strip().split(":")]
    try:
        spec, rest = _parse_spec(parts)
    except (IndexError, ValueError) as exc:
        raise ParseError(f"malformed ring spec {text!r}") from exc
    if rest:
        raise ParseError(f"trailing fields {':'.join(rest)!r} in ring spec {text!r}")
    return spec


def _parse_spec(parts: list[str]) -> tuple[RingSpec, list[str]]:
    head, rest = parts[0], parts[1:]
    if head == "Q":
        return RingSpec.rationals(), rest
    if head == "Zmod":
        return RingSpec.integers_mod(int(rest[0])), rest[1:]
    if head == "gdt":
        return RingSpec.generic_dtilde(int(rest[0]), int(rest[1])), rest[2:]
    if head == "gsp":
        return RingSpec.generic_special(int(rest[0])), rest[1:]
    if head == "nil":
        base, rest = _parse_spec(rest)
        return RingSpec.nilpotent_ext(base, int(rest[0])), rest[1:]
    if head == "params":
        count = int(rest[0])
        base, rest = _parse_spec(rest[1:])
        return RingSpec.with_params(base, count), rest
    raise ParseError(f"unknown ring constructor {head!r}")


class Elem:
    """An element of a ``Ring``; arithmetic is delegated to the ring."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: "Ring", value: Any):
        self.ring = ring
        self.value = value

    def _other(self, other) -> Any:
        if isinstance(other, Elem):
            if other.ring is not self.ring and other.ring.spec != self.ring.spec:
                raise RingMismatchError(f"{self.ring.spec} vs {other.ring.spec}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.ring.coerce(other).value
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Elem(self.ring, self.ring._add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        r = self.ring
        return Elem(r, r._add(self.value, r._neg(v)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Elem(self.ring, self.ring._neg(self.value))

    def __mul__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Elem(self.ring, self.ring._mul(self.value, v))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = self.ring.one
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return self.value == v

    def __hash__(self) -> int:
        return hash((self.ring.spec, self.ring._hashable(self.value)))

    def is_zero(self) -> bool:
        return self.ring._is_zero(self.value)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        return self.ring.format(self.value)

    def __repr__(self) -> str:
        return f"Elem({self.ring.spec}, {str(self)!r})"


class Ring:
    """Base class: subclasses supply payload-level arithmetic."""

    spec: RingSpec

    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.zero = Elem(self, self._zero())
        self.one = Elem(self, self._from_fraction(Fraction(1)))

    # payload-level protocol
    def _zero(self):
        return self._from_fraction(Fraction(0))

    def _from_fraction(self, q: Fraction):
        raise NotImplementedError

    def _add(self, x, y):
        raise NotImplementedError

    def _neg(self, x):
        raise NotImplementedError

    def _mul(self, x, y):
        raise NotImplementedError

    def _is_zero(self, x) -> bool:
        return x == self.zero.value

    def _hashable(self, x):
        return x

    def format(self, x) -> str:
        raise NotImplementedError

    def _resolve(self, name: str) -> "Elem":
        raise ParseError(f"ring {self.spec} has no variable {name!r}")

    # public surface
    def coerce(self, value) -> Elem:
        if isinstance(value, Elem):
            if value.ring.spec != self.spec:
                raise RingMismatchError(f"{value.ring.spec} is not {self.spec}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Polynomial):
            return self.from_polynomial(value)
        return Elem(self, self._from_fraction(Fraction(value)))

    __call__ = coerce

    def parse(self, text: str) -> Elem:
        return parse_expression(text, self._resolve, lambda q: Elem(self, self._from_fraction(q)))

    def from_polynomial(self, p: Polynomial) -> Elem:
        """Embed a polynomial whose variables this ring knows about."""
        result = self.zero
        for mono, c in p.terms.items():
            term = Elem(self, self._from_fraction(c))
            for v in mono:
                term = term * self._resolve(str(v))
            result = result + term
        return result

    def generators(self) -> list[Elem]:
        """The distinguished nilpotent generators (``e_i`` or classes of ``X_ij``)."""
        raise NotANilpotentRingError(f"{self.spec} has no nilpotent generators")

    def __repr__(self) -> str:
        return f"Ring({self.spec})"


class Rationals(Ring):
    def _from_fraction(self, q):
        return Fraction(q)

    def _add(self, x, y):
        return x + y

    def _neg(self, x):
        return -x

    def _mul(self, x, y):
        return x * y

    def format(self, x) -> str:
        return format_fraction(x)


class IntegersMod(Ring):
    def __init__(self, spec: RingSpec):
        self.modulus = spec.modulus
        super().__init__(spec)

    def _from_fraction(self, q):
        q = Fraction(q)
        try:
            inv = pow(q.denominator, -1, self.modulus)
        except ValueError:
            raise ParseError(f"{q} has no image in Z/{self.modulus}") from None
        return (q.numerator * inv) % self.modulus

    def _add(self, x, y):
        return (x + y) % self.modulus

    def _neg(self, x):
        return (-x) % self.modulus

    def _mul(self, x, y):
        return (x * y) % self.modulus

    def format(self, x) -> str:
        return str(x)


class NilpotentExt(Ring):
    """``B[e1..ek] / (e_i e_j)``; payload ``(b0, (b1..bk))`` of base payloads."""

    def __init__(self, spec: RingSpec):
        self.base = ring_make(spec.base)
        self.k = spec.k
        super().__init__(spec)

    def _from_fraction(self, q):
        b = self.base
        return (b._from_fraction(q), (b._zero(),) * self.k)

    def _add(self, x, y):
        add = self.base._add
        return (add(x[0], y[0]), tuple(add(p, q) for p, q in zip(x[1], y[1])))

    def _neg(self, x):
        neg = self.base._neg
        return (neg(x[0]), tuple(neg(p) for p in x[1]))

    def _mul(self, x, y):
        b = self.base
        x0, y0 = x[0], y[0]
        return (
            b._mul(x0, y0),
            tuple(b._add(b._mul(x0, q), b._mul(p, y0)) for p, q in zip(x[1], y[1])),
        )

    def make(self, scalar, nilpotent: Iterable) -> Elem:
        """Build ``scalar + sum c_i e_i`` from base-coercible values."""
        b = self.base
        coeffs = tuple(b.coerce(c).value for c in nilpotent)
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} nilpotent coefficients")
        return Elem(self, (b.coerce(scalar).value, coeffs))

    def scalar_part(self, x: Elem) -> Elem:
        return Elem(self.base, x.value[0])

    def nilpotent_part(self, x: Elem) -> list[Elem]:
        return [Elem(self.base, c) for c in x.value[1]]

    def generators(self) -> list[Elem]:
        b = self.base
        gens = []
        for idx in range(self.k):
            coeffs = tuple(b._from_fraction(Fraction(int(i == idx))) for i in range(self.k))
            gens.append(Elem(self, (b._zero(), coeffs)))
        return gens

    def _resolve(self, name):
        match = re.fullmatch(r"e(\d+)", name)
        if match is None or not 1 <= int(match.group(1)) <= self.k:
            raise ParseError(f"ring {self.spec} has no variable {name!r}")
        return self.generators()[int(match.group(1)) - 1]

    def _is_zero(self, x) -> bool:
        b = self.base
        return b._is_zero(x[0]) and all(b._is_zero(c) for c in x[1])

    def format(self, x) -> str:
        b = self.base
        parts = []
        pieces = [("", x[0])] + [(f"e{i + 1}", c) for i, c in enumerate(x[1])]
        for name, c in pieces:
            if b._is_zero(c):
                continue
            text = b.format(c)
            negative = text.startswith("-")
            mag = text[1:] if negative else text
            if name:
                body = name if mag == "1" else f"{mag}*{name}"
            else:
                body = mag
            if not parts:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append((" - " if negative else " + ") + body)
        return "".join(parts) or "0"


class PolynomialQuotient(Ring):
    """Polynomial-backed rings: free parameters, optionally over a generic algebra.

    ``ideal`` is None for ``Q[a1..ar]``; otherwise payloads are kept reduced
    modulo the full D~ ideal (by rewriting) or the special ideal (by oracle).
    """

    def __init__(self, spec: RingSpec, ideal: IdealSpec | None, params: int):
        self.ideal = ideal
        self.params = params
        self.m = ideal.m if ideal else 0
        self.n = ideal.n if ideal else 0
        super().__init__(spec)

    def _from_fraction(self, q):
        return Polynomial.const(q)

    def reduce(self, p: Polynomial) -> Polynomial:
        for mono in p.terms:
            for v in mono:
                if v.family == INPUT:
                    raise ParseError(f"input variable {v} cannot live in {self.spec}")
                if v.family == PARAM and v.i > self.params:
                    raise IndexOutOfRangeError(f"{v} exceeds the {self.params} parameters of {self.spec}")
                if v.family == MATRIX and self.ideal is None:
                    raise IndexOutOfRangeError(f"{self.spec} has no matrix variables")
        if self.ideal is None:
            return p
        if self.ideal.kind is IdealKind.FULL_DTILDE:
            return reduce_dtilde(p, self.m, self.n)
        check_grid(p, self.m, self.n)
        return oracle_reduce(p, self.ideal)

    def _add(self, x, y):
        # the span of reduced monomials is closed under addition for both ideals
        return x + y

    def _neg(self, x):
        return -x

    def _mul(self, x, y):
        return self.reduce(x * y)

    def _is_zero(self, x) -> bool:
        return x.is_zero()

    def format(self, x) -> str:
        return str(x)

    def from_polynomial(self, p: Polynomial) -> Elem:
        return Elem(self, self.reduce(p))

    def _resolve(self, name):
        return self.from_polynomial(Polynomial.var(parse_variable(name)))

    def x(self, i: int, j: int) -> Elem:
        return self.from_polynomial(Polynomial.var(X(i, j)))

    def param(self, r: int) -> Elem:
        return self.from_polynomial(Polynomial.var(a(r)))

    def params_list(self) -> list[Elem]:
        return [self.param(r) for r in range(1, self.params + 1)]

    def generators(self) -> list[Elem]:
        if self.ideal is None:
            return super().generators()
        return [self.x(i, j) for i in range(1, self.m + 1) for j in range(1, self.n + 1)]

    def polynomial(self, x: Elem) -> Polynomial:
        return x.value


@lru_cache(maxsize=None)
def _make(spec: RingSpec) -> Ring:
    kind = spec.kind
    if kind is RingKind.RATIONALS:
        return Rationals(spec)
    if kind is RingKind.INTEGERS_MOD:
        if spec.modulus < 1:
            raise ValueError("modulus must be positive")
        if spec.modulus % 2 == 0:
            raise EvenModulusError(f"Z/{spec.modulus}: 2 is not cancellable for an even modulus")
        return IntegersMod(spec)
    if kind is RingKind.NILPOTENT_EXT:
        if spec.k < 1:
            raise ValueError("a nilpotent extension needs at least one generator")
        if spec.base is None or spec.base.kind not in (RingKind.RATIONALS, RingKind.INTEGERS_MOD):
            raise ValueError("nilpotent extensions are built over Q or Zmod only")
        return NilpotentExt(spec)
    if kind is RingKind.GENERIC_DTILDE:
        if spec.m < 1 or spec.n < 1:
            raise ValueError("generic D~ algebras need m, n >= 1")
        return PolynomialQuotient(spec, IdealSpec.full_dtilde(spec.m, spec.n), 0)
    if kind is RingKind.GENERIC_SPECIAL:
        if spec.n < 2:
            raise ValueError("generic special algebras need n >= 2")
        return PolynomialQuotient(spec, IdealSpec.special_only(spec.n), 0)
    if kind is RingKind.WITH_PARAMS:
        if spec.params < 1:
            raise ValueError("WithParams needs at least one parameter")
        base = spec.base
        if base.kind is RingKind.RATIONALS:
            return PolynomialQuotient(spec, None, spec.params)
        if base.kind in (RingKind.GENERIC_DTILDE, RingKind.GENERIC_SPECIAL):
            inner = _make(base)
            return PolynomialQuotient(spec, inner.ideal, spec.params)
        raise ValueError("parameters can be adjoined to Q, gdt or gsp only")
    raise ValueError(f"unknown ring kind {kind}")


def ring_make(spec: RingSpec | str) -> Ring:
    """Build (or fetch the cached) ring for ``spec``."""
    if isinstance(spec, str):
        spec = parse_ring_spec(spec)
    return _make(spec)


def is_two_cancellable_witness(ring: Ring, x: Elem) -> bool:
    """Check ``x + x == 0 implies x == 0`` for this particular ``x``."""
    return not (x + x).is_zero() or x.is_zero()


def nilpotent_generators(ring: Ring) -> list[Elem]:
    return ring.generators()
