"""Exact sparse Gaussian elimination over the rationals.

Vectors are dicts ``{column_key: Fraction}`` with no zero entries.  Column keys
may be any totally ordered values; the pivot of a row is its largest key.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Vector = dict


def _axpy(target: dict, coeff: Fraction, row: Mapping) -> None:
    """target += coeff * row, in place, dropping cancelled entries."""
    for col, v in row.items():
        s = target.get(col, 0) + coeff * v
        if s:
            target[col] = s
        else:
            target.pop(col, None)


class EchelonBasis:
    """Reduced row echelon basis of a subspace, grown one vector at a time.

    Every stored row has pivot coefficient 1 and no entry in any other pivot
    column, so ``reduce`` needs a single pass and its remainder is canonical:
    two vectors are congruent modulo the span iff their remainders agree.
    """

    def __init__(self, vectors: Iterable[Mapping] = ()):
        self._rows: dict[Hashable, dict] = {}
        # column -> pivots of the rows that have a nonzero entry there
        self._occurs: dict[Hashable, set] = {}
        for vec in vectors:
            self.add(vec)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> set:
        return set(self._rows)

    def rows(self) -> dict:
        return {p: dict(r) for p, r in self._rows.items()}

    def reduce(self, vec: Mapping) -> dict:
        out = {c: Fraction(v) for c, v in vec.items() if v}
        for col in [c for c in out if c in self._rows]:
            coeff = out.get(col)
            if coeff:
                _axpy(out, -coeff, self._rows[col])
        return out

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; return True iff the rank grew."""
        row = self.reduce(vec)
        if not row:
            return False
        pivot = max(row)
        inv = 1 / row[pivot]
        if inv != 1:
            row = {c: v * inv for c, v in row.items()}
        for other in list(self._occurs.get(pivot, ())):
            target = self._rows[other]
            coeff = target[pivot]
            before = set(target)
            _axpy(target, -coeff, row)
            after = set(target)
            for col in before - after:
                self._occurs[col].discard(other)
            for col in after - before:
                self._occurs.setdefault(col, set()).add(other)
        self._rows[pivot] = row
        for col in row:
            self._occurs.setdefault(col, set()).add(pivot)
        return True


def rank(vectors: Iterable[Mapping]) -> int:
    return EchelonBasis(vectors).rank


def dense_rank(matrix: list[list]) -> int:
    """Rank of a dense list-of-rows matrix with rational entries."""
    return rank({j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix)
