"""Dense matrices over the supported rings, with the nilpotency predicates.

Vectors are plain sequences of ring elements or ``1 x n`` / ``n x 1``
matrices; predicates accept either.
"""

from __future__ import annotations

import json
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Sequence

from nilmat.errors import CapExceededError, ShapeMismatchError
from nilmat.poly import INPUT, MATRIX, PARAM, Polynomial, parse_polynomial
from nilmat.rings import Elem, Ring, ring_make

DET_CAP = 6


class Matrix:
    """Immutable ``m x n`` matrix of elements of one ring."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: Ring, rows: Iterable[Iterable]):
        entries = tuple(tuple(ring.coerce(x) for x in row) for row in rows)
        if not entries or not entries[0]:
            raise ShapeMismatchError("matrices must have at least one row and column")
        width = len(entries[0])
        if any(len(r) != width for r in entries):
            raise ShapeMismatchError("ragged rows")
        self.ring = ring
        self.entries = entries

    @classmethod
    def row_vector(cls, ring: Ring, values: Iterable) -> "Matrix":
        return cls(ring, [list(values)])

    @classmethod
    def column_vector(cls, ring: Ring, values: Iterable) -> "Matrix":
        return cls(ring, [[v] for v in values])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls(ring, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring: Ring, m: int, n: int) -> "Matrix":
        return cls(ring, [[0] * n for _ in range(m)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, idx: tuple[int, int]) -> Elem:
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> list[Elem]:
        return list(self.entries[i])

    def col(self, j: int) -> list[Elem]:
        return [r[j] for r in self.entries]

    def row_list(self) -> list[list[Elem]]:
        return [list(r) for r in self.entries]

    def col_list(self) -> list[list[Elem]]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.col_list())

    T = property(transpose)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.ring, [[self.entries[i][j] for j in cols] for i in rows])

    def with_row(self, values: Sequence) -> "Matrix":
        return Matrix(self.ring, self.row_list() + [list(values)])

    def with_col(self, values: Sequence) -> "Matrix":
        return Matrix(self.ring, [r + [v] for r, v in zip(self.row_list(), values)])

    def permute_cols(self, perm: Sequence[int]) -> "Matrix":
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        return Matrix(self.ring, [[r[p] for p in perm] for r in self.entries])

    def permute_rows(self, perm: Sequence[int]) -> "Matrix":
        return Matrix(self.ring, [self.entries[p] for p in perm])

    def replace(self, i: int, j: int, value) -> "Matrix":
        rows = self.row_list()
        rows[i][j] = value
        return Matrix(self.ring, rows)

    def map(self, fn) -> "Matrix":
        return Matrix(self.ring, [[fn(x) for x in r] for r in self.entries])

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ShapeMismatchError(f"{self.shape} + {other.shape}")
        return Matrix(self.ring, [[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return self.map(lambda x: x * other)

    __matmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            x == y for r, s in zip(self.entries, other.entries) for x, y in zip(r, s)
        )

    __hash__ = None

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries) + "]"

    def __repr__(self) -> str:
        return f"Matrix({self.ring.spec}, {self})"

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring.spec),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Matrix":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            ring = ring_make(data["ring"])
            entries = [[ring.parse(str(x)) for x in r] for r in data["entries"]]
            mat = cls(ring, entries)
        except KeyError as exc:
            raise ShapeMismatchError(f"matrix JSON lacks field {exc}") from None
        if "rows" in data and data["rows"] != mat.rows or "cols" in data and data["cols"] != mat.cols:
            raise ShapeMismatchError("declared rows/cols disagree with entries")
        return mat


def _vector(x) -> list[Elem]:
    if isinstance(x, Matrix):
        if x.rows == 1:
            return x.row(0)
        if x.cols == 1:
            return x.col(0)
        raise ShapeMismatchError(f"expected a vector, got a {x.rows}x{x.cols} matrix")
    return list(x)


def _same_length(x: list, y: list) -> None:
    if len(x) != len(y):
        raise ShapeMismatchError(f"vector lengths {len(x)} and {len(y)} differ")


def is_in_D(x) -> bool:
    """``x_j * x_j' == 0`` for every pair of coordinates, squares included."""
    v = _vector(x)
    return all((v[j] * v[k]).is_zero() for j in range(len(v)) for k in range(j, len(v)))


def is_in_dtilde(X: Matrix) -> bool:
    """Membership in D~(m, n); vectors fall back to D(n)."""
    m, n = X.shape
    if m == 1 or n == 1:
        return is_in_D(X)
    e = X.entries
    # the defining expression is invariant under i<->i' and under j<->j'
    for i in range(m):
        for i2 in range(i, m):
            for j in range(n):
                for j2 in range(j, n):
                    if not (e[i][j] * e[i2][j2] + e[i2][j] * e[i][j2]).is_zero():
                        return False
    return True


def is_special(X: Matrix) -> bool:
    m, n = X.shape
    if m < 2 or n < 2:
        raise ShapeMismatchError("special matrices have at least two rows and columns")
    e = X.entries
    for i, i2 in combinations(range(m), 2):
        for j, j2 in combinations(range(n), 2):
            if not (e[i][j] * e[i2][j2] + e[i2][j] * e[i][j2]).is_zero():
                return False
    return True


def are_neighbors(x, y) -> bool:
    xs, ys = _vector(x), _vector(y)
    _same_length(xs, ys)
    return is_in_D([p - q for p, q in zip(xs, ys)])


def is_infinitesimal_simplex(points: Sequence) -> bool:
    """Every pair of the given points are first-order neighbours."""
    vecs = [_vector(p) for p in points]
    for v in vecs[1:]:
        _same_length(vecs[0], v)
    return all(are_neighbors(p, q) for p, q in combinations(vecs, 2))


def beta(x, y) -> list[Elem]:
    """The ``n^2`` entries ``x_j y_j' + x_j' y_j`` in row-major ``(j, j')`` order."""
    xs, ys = _vector(x), _vector(y)
    _same_length(xs, ys)
    n = len(xs)
    return [xs[j] * ys[k] + xs[k] * ys[j] for j in range(n) for k in range(n)]


def mat_mul(P: Matrix, Q: Matrix) -> Matrix:
    if P.cols != Q.rows:
        raise ShapeMismatchError(f"cannot multiply {P.shape} by {Q.shape}")
    ring = P.ring
    zero = ring.zero
    cols = Q.col_list()
    out = []
    for r in P.entries:
        row = []
        for c in cols:
            acc = zero
            for x, y in zip(r, c):
                acc = acc + x * y
            row.append(acc)
        out.append(row)
    return Matrix(ring, out)


def mat_vec(P: Matrix, v: Sequence) -> list[Elem]:
    return mat_mul(P, Matrix.column_vector(P.ring, v)).col(0)


def linear_combination(vectors: Sequence[Sequence], coeffs: Sequence) -> list[Elem]:
    out = [vectors[0][0].ring.zero] * len(vectors[0])
    for vec, c in zip(vectors, coeffs):
        out = [acc + c * x for acc, x in zip(out, vec)]
    return out


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def det(X: Matrix, cap: int = DET_CAP) -> Elem:
    """Leibniz determinant: no division, so it is valid with zero divisors."""
    m, n = X.shape
    if m != n:
        raise ShapeMismatchError(f"determinant of a {m}x{n} matrix")
    if n > cap:
        raise CapExceededError(f"Leibniz sum capped at n={cap}")
    total = X.ring.zero
    for perm in permutations(range(n)):
        term = X.ring.one
        for i, p in enumerate(perm):
            term = term * X.entries[i][p]
            if term.is_zero():
                break
        if not term.is_zero():
            total = total + term if permutation_sign(perm) > 0 else total - term
    return total


def mult_trace(X: Matrix) -> Elem:
    """Product of the diagonal entries."""
    m, n = X.shape
    if m != n:
        raise ShapeMismatchError(f"multiplicative trace of a {m}x{n} matrix")
    out = X.ring.one
    for i in range(n):
        out = out * X.entries[i][i]
    return out


def trace(X: Matrix) -> Elem:
    out = X.ring.zero
    for i in range(min(X.shape)):
        out = out + X.entries[i][i]
    return out


class PolyMap:
    """A zero-preserving polynomial map ``R^m -> R^l``.

    Components are polynomials in ``u1..um``; their coefficients may involve
    parameters ``a_r`` when the target ring has them.
    """

    def __init__(self, domain: int, components: Sequence[Polynomial | str]):
        comps = tuple(parse_polynomial(c) if isinstance(c, str) else c for c in components)
        for comp in comps:
            if any(not any(v.family == INPUT for v in mono) for mono in comp.terms):
                raise ValueError(f"component {comp} is not zero-preserving")
            for mono in comp.terms:
                for v in mono:
                    if v.family == INPUT and not 1 <= v.i <= domain:
                        raise ShapeMismatchError(f"{v} outside a {domain}-dimensional domain")
                    if v.family == MATRIX:
                        raise ValueError(f"component {comp} mentions matrix variable {v}")
        self.domain = domain
        self.components = comps

    @property
    def codomain(self) -> int:
        return len(self.components)

    def homogeneous_part(self, d: int) -> "PolyMap":
        def input_degree(mono):
            return sum(1 for v in mono if v.family == INPUT)

        if d == 0:
            raise ValueError("zero-preserving maps have no constant part")
        parts = [
            Polynomial({mo: c for mo, c in comp.terms.items() if input_degree(mo) == d})
            for comp in self.components
        ]
        return PolyMap(self.domain, parts)

    def __call__(self, values: Sequence[Elem]) -> list[Elem]:
        values = list(values)
        if len(values) != self.domain:
            raise ShapeMismatchError(f"expected {self.domain} inputs, got {len(values)}")
        ring = values[0].ring
        out = []
        for comp in self.components:
            acc = ring.zero
            for mono, c in comp.terms.items():
                term = ring.from_polynomial(Polynomial({_param_part(mono): c}))
                for v in mono:
                    if v.family == INPUT:
                        term = term * values[v.i - 1]
                acc = acc + term
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {"domain": self.domain, "codomain": self.codomain, "components": [str(c) for c in self.components]}

    @classmethod
    def from_json(cls, data: dict | str) -> "PolyMap":
        if isinstance(data, str):
            data = json.loads(data)
        pm = cls(data["domain"], data["components"])
        if "codomain" in data and data["codomain"] != pm.codomain:
            raise ShapeMismatchError("declared codomain disagrees with the component count")
        return pm


def _param_part(mono) -> tuple:
    return tuple(v for v in mono if v.family == PARAM)


def apply_polymap_columns(g: PolyMap, X: Matrix) -> Matrix:
    """``g . X``: apply ``g`` to every column of ``X``."""
    if g.domain != X.rows:
        raise ShapeMismatchError(f"map domain {g.domain} vs {X.rows} rows")
    cols = [g(c) for c in X.col_list()]
    return Matrix(X.ring, [[c[k] for c in cols] for k in range(g.codomain)])


def det_identity_holds(X: Matrix) -> bool:
    n = X.rows
    return det(X) == factorial(n) * mult_trace(X)


__all__ = [
    "Matrix",
    "PolyMap",
    "apply_polymap_columns",
    "are_neighbors",
    "beta",
    "det",
    "is_in_D",
    "is_in_dtilde",
    "is_infinitesimal_simplex",
    "is_special",
    "linear_combination",
    "mat_mul",
    "mat_vec",
    "mult_trace",
    "permutation_sign",
]
