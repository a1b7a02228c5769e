"""Generic algebras ``Q[X_11..X_mn] / J`` for the two ideals of interest.

``FullDtilde(m, n)`` is generated by ``X_ij X_i'j' + X_i'j X_ij'`` for all
index choices; ``SpecialOnly(n)`` keeps only the generators with ``i != i'``
and ``j != j'``.  For the full ideal a rewriting normal form is available:

* a monomial with a repeated row or a repeated column index vanishes
  (this includes squares);
* otherwise its factors are sorted by row and the columns are brought into
  increasing order by transpositions, each one flipping the sign.

Both ideals can also be queried through a graded linear-algebra oracle that
knows nothing about the rewriting rules: in X-degree ``d`` the ideal is
spanned by ``mu * g`` for generators ``g`` and monomials ``mu`` of degree
``d - 2``, and membership is decided by exact elimination.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import NamedTuple

from nilmat.errors import CapExceededError, IndexOutOfRangeError
from nilmat.linalg import EchelonBasis
from nilmat.poly import (
    MATRIX,
    X,
    Monomial,
    Polynomial,
    count_monomials,
    matrix_vars,
    mono_mul,
    monomials_of_xdegree,
    non_x_part,
    x_degree,
)

DEFAULT_SIZE_CAP = 5
ORACLE_MAX_DEGREE = 4
ORACLE_MAX_CELLS = 16


def check_grid(p: Polynomial, m: int, n: int) -> None:
    for mono in p.terms:
        for v in mono:
            if v.family == MATRIX and not (1 <= v.i <= m and 1 <= v.j <= n):
                raise IndexOutOfRangeError(f"{v} lies outside the {m}x{n} grid")


def _permutation_sign(seq) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def canonical_monomial(xmono: Monomial) -> tuple[int, Monomial] | None:
    """Rewrite a pure X-monomial to ``(sign, canonical)`` or None when it vanishes."""
    rows = [v.i for v in xmono]
    cols = [v.j for v in xmono]
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        return None
    # xmono is sorted, so rows are already increasing
    sign = _permutation_sign(cols)
    return sign, tuple(X(i, j) for i, j in zip(rows, sorted(cols)))


def reduce_dtilde(p: Polynomial, m: int, n: int) -> Polynomial:
    """Canonical representative of ``p + J`` for the full ideal, as a polynomial."""
    check_grid(p, m, n)
    out: dict[Monomial, Fraction] = {}
    for mono, c in p.terms.items():
        xs = tuple(v for v in mono if v.family == MATRIX)
        if len(xs) <= 1:
            key, sign = mono, 1
        else:
            canon = canonical_monomial(xs)
            if canon is None:
                continue
            sign, xs = canon
            key = mono_mul(non_x_part(mono), xs)
        s = out.get(key, 0) + sign * c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return Polynomial._raw(out)


class BasisLabel(NamedTuple):
    """A (row-set, column-set) pair naming one basis class of the full quotient."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.rows)

    def representative(self) -> Polynomial:
        """The diagonal monomial ``X_{r1 c1} ... X_{rp cp}``."""
        return Polynomial.monomial(X(i, j) for i, j in zip(self.rows, self.cols))

    def __str__(self) -> str:
        # 1 and the single variables read better than 0x0 and 1x1 minors
        if self.degree == 0:
            return "1"
        if self.degree == 1:
            return str(X(self.rows[0], self.cols[0]))
        return "det{%s|%s}" % (",".join(map(str, self.rows)), ",".join(map(str, self.cols)))

    @classmethod
    def of(cls, xmono: Monomial) -> "BasisLabel":
        return cls(tuple(v.i for v in xmono), tuple(v.j for v in xmono))


@dataclass(frozen=True)
class NormalForm:
    """Canonical element of the full generic algebra over ``m x n`` variables."""

    m: int
    n: int
    poly: Polynomial

    def terms(self) -> dict[BasisLabel, Polynomial]:
        """Coefficient (a polynomial in the parameters) of each basis class."""
        out: dict[BasisLabel, Polynomial] = {}
        for mono, c in self.poly.terms.items():
            xs = tuple(v for v in mono if v.family == MATRIX)
            label = BasisLabel.of(xs)
            out[label] = out.get(label, Polynomial()) + Polynomial.monomial(non_x_part(mono), c)
        return out

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __add__(self, other: "NormalForm") -> "NormalForm":
        return NormalForm(self.m, self.n, self.poly + other.poly)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        return normal_form(self.poly * other.poly, self.m, self.n)

    def __str__(self) -> str:
        return str(self.poly)


def normal_form(p: Polynomial, m: int, n: int) -> NormalForm:
    return NormalForm(m, n, reduce_dtilde(p, m, n))


def algebra_basis(m: int, n: int, cap: int = DEFAULT_SIZE_CAP) -> list[BasisLabel]:
    """Basis labels of the full quotient, ordered by degree then lexicographically."""
    if not (1 <= m <= cap and 1 <= n <= cap):
        raise CapExceededError(f"grid {m}x{n} exceeds the size cap {cap}")
    labels = []
    for p in range(min(m, n) + 1):
        for rows in combinations(range(1, m + 1), p):
            for cols in combinations(range(1, n + 1), p):
                labels.append(BasisLabel(rows, cols))
    return labels


class AlgebraDimension(NamedTuple):
    dimension: int
    basis: list[BasisLabel]


def algebra_dimension(m: int, n: int, cap: int = DEFAULT_SIZE_CAP) -> AlgebraDimension:
    basis = algebra_basis(m, n, cap)
    return AlgebraDimension(len(basis), basis)


def dimension_formula(m: int, n: int) -> int:
    return sum(comb(m, p) * comb(n, p) for p in range(min(m, n) + 1))


class IdealKind(enum.Enum):
    FULL_DTILDE = "FullDtilde"
    SPECIAL_ONLY = "SpecialOnly"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class IdealSpec:
    """A homogeneous ideal in the ``m x n`` matrix variables.

    ``CUSTOM`` ideals carry their own generators; they are used to compare the
    ideals cut out by alternative characterizations of the same set.
    """

    kind: IdealKind
    m: int
    n: int
    custom: tuple[Polynomial, ...] = field(default=(), compare=True)

    @classmethod
    def full_dtilde(cls, m: int, n: int) -> "IdealSpec":
        return cls(IdealKind.FULL_DTILDE, m, n)

    @classmethod
    def special_only(cls, n: int) -> "IdealSpec":
        return cls(IdealKind.SPECIAL_ONLY, n, n)

    @classmethod
    def generated_by(cls, m: int, n: int, gens) -> "IdealSpec":
        gens = tuple(g for g in gens if not g.is_zero())
        for g in gens:
            check_grid(g, m, n)
            if any(non_x_part(mono) for mono in g.terms):
                raise ValueError("custom generators must be pure X-polynomials")
            if len({x_degree(mono) for mono in g.terms}) != 1:
                raise ValueError("custom generators must be homogeneous")
        return cls(IdealKind.CUSTOM, m, n, gens)

    def generators(self) -> list[Polynomial]:
        if self.kind is IdealKind.CUSTOM:
            return list(self.custom)
        m, n = self.m, self.n
        strict = self.kind is IdealKind.SPECIAL_ONLY
        gens = []
        for i in range(1, m + 1):
            for i2 in range(i, m + 1):
                for j in range(1, n + 1):
                    for j2 in range(j, n + 1):
                        if strict and (i == i2 or j == j2):
                            continue
                        gens.append(
                            Polynomial.var(X(i, j)) * Polynomial.var(X(i2, j2))
                            + Polynomial.var(X(i2, j)) * Polynomial.var(X(i, j2))
                        )
        return gens

    def __str__(self) -> str:
        if self.kind is IdealKind.SPECIAL_ONLY:
            return f"SpecialOnly({self.n})"
        return f"{self.kind.value}({self.m},{self.n})"


def _check_oracle_caps(ideal: IdealSpec, d: int, max_degree: int, max_cells: int) -> None:
    if ideal.m * ideal.n > max_cells:
        raise CapExceededError(f"{ideal.m}x{ideal.n} grid exceeds the oracle cap of {max_cells} cells")
    if d > max_degree:
        raise CapExceededError(f"X-degree {d} exceeds the oracle cap {max_degree}")


@lru_cache(maxsize=None)
def graded_ideal_basis(ideal: IdealSpec, d: int) -> EchelonBasis:
    """Echelon basis of the degree-``d`` piece of ``ideal``."""
    basis = EchelonBasis()
    by_degree: dict[int, list[Polynomial]] = {}
    for g in ideal.generators():
        by_degree.setdefault(g.x_degree(), []).append(g)
    for k, pieces in by_degree.items():
        if k > d:
            continue
        for mu in monomials_of_xdegree(ideal.m, ideal.n, d - k):
            for g in pieces:
                basis.add({mono_mul(mono, mu): c for mono, c in g.terms.items()})
    return basis


def oracle_rank(ideal: IdealSpec, d: int) -> int:
    return graded_ideal_basis(ideal, d).rank


def oracle_quotient_dimension(
    ideal: IdealSpec, d: int, max_degree: int = ORACLE_MAX_DEGREE, max_cells: int = ORACLE_MAX_CELLS
) -> int:
    """Dimension of the degree-``d`` piece of the quotient, from the rank of ``J_d``."""
    _check_oracle_caps(ideal, d, max_degree, max_cells)
    return count_monomials(ideal.m, ideal.n, d) - oracle_rank(ideal, d)


def oracle_total_dimension(ideal: IdealSpec, max_degree: int = ORACLE_MAX_DEGREE) -> int:
    """Total quotient dimension, summed until a degree piece vanishes.

    Once the degree-``d`` quotient piece is zero every higher piece is zero too,
    since the quotient is generated in degree 1.
    """
    total = 0
    for d in range(max_degree + 1):
        piece = oracle_quotient_dimension(ideal, d, max_degree=max_degree)
        if piece == 0:
            return total
        total += piece
    raise CapExceededError(f"{ideal} has nonzero quotient up to degree {max_degree}")


def oracle_reduce(
    p: Polynomial,
    ideal: IdealSpec,
    max_degree: int = ORACLE_MAX_DEGREE,
    max_cells: int = ORACLE_MAX_CELLS,
) -> Polynomial:
    """Canonical remainder of ``p`` modulo ``ideal``, degree by degree.

    Parameter monomials are treated as coefficients: each parameter slice is
    reduced on its own, which is valid because the ideal is defined over Q.
    """
    check_grid(p, ideal.m, ideal.n)
    out: dict[Monomial, Fraction] = {}
    for pmono, xpoly in p.split_by_non_x().items():
        by_deg: dict[int, dict[Monomial, Fraction]] = {}
        for xmono, c in xpoly.terms.items():
            by_deg.setdefault(len(xmono), {})[xmono] = c
        for d, vec in by_deg.items():
            _check_oracle_caps(ideal, d, max_degree, max_cells)
            vec = graded_ideal_basis(ideal, d).reduce(vec)
            for xmono, c in vec.items():
                out[mono_mul(pmono, xmono)] = c
    return Polynomial._raw(out)


def membership_oracle(
    p: Polynomial,
    ideal: IdealSpec,
    max_degree: int = ORACLE_MAX_DEGREE,
    max_cells: int = ORACLE_MAX_CELLS,
) -> bool:
    """True iff ``p`` lies in ``ideal`` (with parameters read as free coefficients)."""
    return oracle_reduce(p, ideal, max_degree, max_cells).is_zero()


def ideals_equal(first: IdealSpec, second: IdealSpec) -> bool:
    """Equality of two ideals, each tested by membership of the other's generators."""
    return all(membership_oracle(g, second) for g in first.generators()) and all(
        membership_oracle(g, first) for g in second.generators()
    )


def generic_matrix(m: int, n: int, ideal: IdealSpec | str = "dtilde", params: int = 0):
    """The matrix of classes ``[X_ij]`` over the generic algebra for ``ideal``.

    ``ideal`` may be an ``IdealSpec`` or one of the shorthands ``"dtilde"`` /
    ``"special"``.  ``params`` adjoins free coefficients ``a1..a_params``.
    """
    from nilmat.matrices import Matrix
    from nilmat.rings import RingSpec, ring_make

    if isinstance(ideal, IdealSpec):
        kind = ideal.kind
        if kind is IdealKind.CUSTOM:
            raise ValueError("generic matrices exist only for FullDtilde and SpecialOnly")
        m, n = ideal.m, ideal.n
    else:
        kind = IdealKind.FULL_DTILDE if ideal == "dtilde" else IdealKind.SPECIAL_ONLY
    if kind is IdealKind.FULL_DTILDE:
        spec = RingSpec.generic_dtilde(m, n)
    else:
        if m != n:
            raise ValueError("the special generic algebra is defined for square grids")
        spec = RingSpec.generic_special(n)
    if params:
        spec = RingSpec.with_params(spec, params)
    ring = ring_make(spec)
    return Matrix(ring, [[ring.x(i, j) for j in range(1, n + 1)] for i in range(1, m + 1)])


def free_matrix_entries(m: int, n: int) -> list[list[Polynomial]]:
    """The ``m x n`` grid of matrix variables as plain polynomials."""
    return [[Polynomial.var(X(i, j)) for j in range(1, n + 1)] for i in range(1, m + 1)]


__all__ = [
    "AlgebraDimension",
    "BasisLabel",
    "IdealKind",
    "IdealSpec",
    "NormalForm",
    "algebra_basis",
    "algebra_dimension",
    "canonical_monomial",
    "dimension_formula",
    "generic_matrix",
    "graded_ideal_basis",
    "ideals_equal",
    "matrix_vars",
    "membership_oracle",
    "normal_form",
    "oracle_quotient_dimension",
    "oracle_rank",
    "oracle_reduce",
    "oracle_total_dimension",
    "reduce_dtilde",
]
