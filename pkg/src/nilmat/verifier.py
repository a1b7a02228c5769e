"""Executable checks for the propositions about D(n), D~(m, n) and special matrices.

Each proposition has two modes:

``randomized``
    Draw concrete inputs satisfying the hypothesis (over nilpotent extensions
    of Q and Z/9, or images of generic matrices) and test the conclusion.
``symbolic``
    Build the generic object (the generic matrix of the quotient algebra, with
    linear and multilinear maps whose coefficients are free parameters) and
    reduce the conclusion to a normal-form or ideal-membership computation.
    A pass is then valid for every commutative Q-algebra.

``mutate=True`` feeds inputs that violate the hypothesis; a sound check must
then report a failure.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from dataclasses import asdict, dataclass, field
from itertools import combinations, combinations_with_replacement, permutations
from math import factorial
from typing import Callable, Iterator, Optional, Sequence

from nilmat.errors import NilmatError
from nilmat.matrices import (
    Matrix,
    PolyMap,
    apply_polymap_columns,
    are_neighbors,
    det,
    is_in_D,
    is_in_dtilde,
    is_infinitesimal_simplex,
    linear_combination,
    mat_mul,
    mat_vec,
    mult_trace,
    permutation_sign,
)
from nilmat.poly import Polynomial, a, u
from nilmat.quotient import (
    IdealSpec,
    free_matrix_entries,
    generic_matrix,
    ideals_equal,
    membership_oracle,
)
from nilmat.rings import Elem, NilpotentExt, Ring
from nilmat.sampling import (
    concrete_ring,
    corrupt,
    corrupt_vector,
    random_coeff_matrix,
    random_coeffs,
    random_dn,
    random_dtilde,
    random_matrix,
    random_polymap_components,
    random_rational,
    random_scalar,
    random_special,
    shift_by_identity,
    small_fraction,
    unimodular_pair,
)

PROPOSITION_IDS = (
    "P1-RowAdjoin",
    "P2-LinComb",
    "P3-Geometric",
    "P4-LinearFunctional",
    "P5-LinearImage",
    "P6-IdealProperty",
    "P7-Bilinear",
    "P8-DV",
    "P9-DVW",
    "P10-CoordFreeIdeal",
    "P11-TrmAlternating",
    "C1-DetTrace",
    "P12-Xlin",
    "P13-RemainderForm",
)
MODES = ("randomized", "symbolic")

MAX_RANDOM_DIM = 4
MAX_SYMBOLIC_DIM = 3


class ConfigError(NilmatError, ValueError):
    """Invalid verification budget or identifier."""


@dataclass(frozen=True)
class Budget:
    cases: int = 1000
    seed: int = 0
    max_dim: int = 3
    symbolic_max_dim: int = 3
    max_degree: int = 3

    def validate(self) -> None:
        if self.cases < 0:
            raise ConfigError("cases must be non-negative")
        if not 2 <= self.max_dim <= MAX_RANDOM_DIM:
            raise ConfigError(f"max_dim must lie in [2, {MAX_RANDOM_DIM}]")
        if not 2 <= self.symbolic_max_dim <= MAX_SYMBOLIC_DIM:
            raise ConfigError(f"symbolic_max_dim must lie in [2, {MAX_SYMBOLIC_DIM}]")
        if not 1 <= self.max_degree <= 3:
            raise ConfigError("max_degree must lie in [1, 3]")


@dataclass
class PropositionReport:
    id: str
    mode: str
    cases_run: int
    status: str
    counterexample: Optional[dict] = None
    reason: Optional[str] = None
    seed: Optional[int] = None
    mutated: bool = False
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def summary(self) -> str:
        tag = " (mutated)" if self.mutated else ""
        line = f"{self.id:<20} {self.mode:<10} {self.status:<7} cases={self.cases_run}{tag}"
        if self.status == "fail" and self.counterexample:
            line += f"  -- {self.counterexample.get('failure')}"
        if self.status == "skipped":
            line += f"  -- {self.reason}"
        return line


# ---------------------------------------------------------------- serialization


def _ser(value):
    if isinstance(value, Matrix):
        return value.to_json()
    if isinstance(value, PolyMap):
        return value.to_json()
    if isinstance(value, Elem):
        return str(value)
    if isinstance(value, Polynomial):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_ser(v) for v in value]
    if isinstance(value, Ring):
        return str(value.spec)
    return value


def serialize_case(case: dict) -> dict:
    return {k: _ser(v) for k, v in case.items()}


# ---------------------------------------------------------------- helpers

Case = dict
Failure = Optional[str]


def _dims(rng: random.Random, budget: Budget, lo: int = 2) -> int:
    return rng.randint(lo, budget.max_dim)


def _ring_or_generic(rng: random.Random) -> Optional[Ring]:
    # one draw in five comes from a generic algebra
    return None if rng.random() < 0.2 else concrete_ring(rng)


def _dtilde_input(rng, budget, mutate, m=None, n=None) -> Matrix:
    m = m or _dims(rng, budget)
    n = n or _dims(rng, budget)
    X_ = random_dtilde(_ring_or_generic(rng), m, n, rng)
    return corrupt(X_, rng) if mutate else X_


def _dn_input(rng, budget, mutate, n=None) -> list[Elem]:
    n = n or _dims(rng, budget, 1)
    vec = random_dn(_ring_or_generic(rng), n, rng)
    return corrupt_vector(vec, rng) if mutate else vec


def _special_input(rng, budget, mutate) -> Matrix:
    n = _dims(rng, budget)
    X_ = random_special(_ring_or_generic(rng), n, rng)
    return shift_by_identity(X_) if mutate else X_


def _arbitrary_matrix(ring: Ring, m: int, n: int, rng: random.Random) -> Matrix:
    """Members, near-members and unconstrained matrices, for equivalence checks."""
    roll = rng.random()
    if roll < 0.35 and hasattr(ring, "k"):
        return random_dtilde(ring, m, n, rng)
    if roll < 0.7 and hasattr(ring, "k"):
        return corrupt(random_dtilde(ring, m, n, rng), rng)
    return random_matrix(ring, m, n, rng)


def _arbitrary_vector(ring: Ring, n: int, rng: random.Random) -> list[Elem]:
    roll = rng.random()
    if roll < 0.4 and hasattr(ring, "k"):
        return random_dn(ring, n, rng)
    if roll < 0.7 and hasattr(ring, "k"):
        vec = random_dn(ring, n, rng)
        k = rng.randrange(n)
        vec[k] = vec[k] + random_scalar(ring, rng)
        return vec
    return [random_scalar(ring, rng) for _ in range(n)]


def _dot(coeffs: Sequence[Elem], vec: Sequence[Elem]) -> Elem:
    acc = vec[0].ring.zero
    for c, x in zip(coeffs, vec):
        acc = acc + c * x
    return acc


def _bilinear(B: Matrix, x: Sequence[Elem], y: Sequence[Elem]) -> Elem:
    return _dot(x, mat_vec(B, y))


def rows_condition(X_: Matrix) -> bool:
    """Each row is a neighbour of 0 and any two rows are neighbours."""
    rows = X_.row_list()
    return all(is_in_D(r) for r in rows) and all(are_neighbors(p, q) for p, q in combinations(rows, 2))


def cols_condition(X_: Matrix) -> bool:
    return rows_condition(X_.transpose())


def functional_witnesses(n: int) -> list[list[int]]:
    """Coordinate projections and pairwise sums of them."""
    out = [[int(k == j) for k in range(n)] for j in range(n)]
    out += [[int(k in (j, j2)) for k in range(n)] for j, j2 in combinations(range(n), 2)]
    return out


def d_by_witnesses(vec: Sequence[Elem]) -> bool:
    """Membership in D(n) read off from the finite witness family of functionals."""
    return all((_dot([vec[0].ring(c) for c in w], vec) ** 2).is_zero() for w in functional_witnesses(len(vec)))


def dtilde_by_columns(F: Matrix) -> bool:
    """``F v`` in D(m) for v ranging over the witness vectors ``e_j``, ``e_j + e_j'``."""
    return all(is_in_D(mat_vec(F, [F.ring(c) for c in w])) for w in functional_witnesses(F.cols))


# ---------------------------------------------------------------- randomized checks


@dataclass(frozen=True)
class Proposition:
    id: str
    statement: str
    sample: Callable[[random.Random, Budget, bool], Case]
    check: Callable[[Case], Failure]
    symbolic: Callable[[Budget, bool], Iterator[tuple[str, Failure]]]
    notes: tuple = ()


def _p1_sample(rng, budget, mutate):
    X_ = _dtilde_input(rng, budget, mutate)
    return {"X": X_, "c": random_coeffs(X_.ring, X_.rows, rng), "d": random_coeffs(X_.ring, X_.cols, rng)}


def _p1_check(case):
    X_ = case["X"]
    if not is_in_dtilde(X_.with_row(linear_combination(X_.row_list(), case["c"]))):
        return "row-extended matrix left D~"
    if not is_in_dtilde(X_.with_col(linear_combination(X_.col_list(), case["d"]))):
        return "column-extended matrix left D~"
    return None


def _p2_check(case):
    X_ = case["X"]
    for i, r in enumerate(X_.row_list()):
        if not is_in_D(r):
            return f"row {i + 1} not in D(n)"
    if not is_in_D(linear_combination(X_.row_list(), case["c"])):
        return "row combination not in D(n)"
    for j, c in enumerate(X_.col_list()):
        if not is_in_D(c):
            return f"column {j + 1} not in D(m)"
    if not is_in_D(linear_combination(X_.col_list(), case["d"])):
        return "column combination not in D(m)"
    return None


def _p3_sample(rng, budget, mutate):
    case = _p1_sample(rng, budget, mutate)
    ring = concrete_ring(rng)
    case["Y"] = _arbitrary_matrix(ring, _dims(rng, budget), _dims(rng, budget), rng)
    return case


def _p3_check(case):
    X_ = case["X"]
    if not rows_condition(X_):
        return "rows are not mutual neighbours"
    if not cols_condition(X_):
        return "columns are not mutual neighbours"
    if not is_in_D(linear_combination(X_.row_list(), case["c"])):
        return "row combination not in D(n)"
    if not is_in_D(linear_combination(X_.col_list(), case["d"])):
        return "column combination not in D(m)"
    zero = [X_.ring.zero] * X_.cols
    if not is_infinitesimal_simplex(X_.row_list() + [zero]):
        return "rows with the zero row are not an infinitesimal simplex"
    Y = case["Y"]
    verdicts = (is_in_dtilde(Y), rows_condition(Y), cols_condition(Y))
    if len(set(verdicts)) != 1:
        return f"conditions disagree on Y: D~={verdicts[0]} rows={verdicts[1]} cols={verdicts[2]}"
    return None


def _p4_sample(rng, budget, mutate):
    x = _dn_input(rng, budget, mutate)
    ring = x[0].ring
    return {
        "x": x,
        "alpha": random_coeffs(ring, len(x), rng),
        "y": _arbitrary_vector(concrete_ring(rng), _dims(rng, budget, 1), rng),
    }


def _p4_check(case):
    x = case["x"]
    if not (_dot(case["alpha"], x) ** 2).is_zero():
        return "alpha(x) is not in D"
    for w in functional_witnesses(len(x)):
        if not (_dot([x[0].ring(c) for c in w], x) ** 2).is_zero():
            return f"witness functional {w} sends x outside D"
    y = case["y"]
    if d_by_witnesses(y) != is_in_D(y):
        return "witness functionals disagree with D(n) membership on y"
    return None


def _p5_sample(rng, budget, mutate):
    x = _dn_input(rng, budget, mutate)
    return {"x": x, "F": random_coeff_matrix(x[0].ring, _dims(rng, budget, 1), len(x), rng)}


def _p5_check(case):
    if not is_in_D(mat_vec(case["F"], case["x"])):
        return "F(x) is not in D(m)"
    return None


def _p6_sample(rng, budget, mutate):
    X_ = _dtilde_input(rng, budget, mutate)
    ring = X_.ring
    return {
        "X": X_,
        "P": random_coeff_matrix(ring, _dims(rng, budget, 1), X_.rows, rng),
        "Q": random_coeff_matrix(ring, X_.cols, _dims(rng, budget, 1), rng),
    }


def _p6_check(case):
    X_ = case["X"]
    if not is_in_dtilde(mat_mul(case["P"], X_)):
        return "P.X left D~"
    if not is_in_dtilde(mat_mul(X_, case["Q"])):
        return "X.Q left D~"
    return None


def _p7_sample(rng, budget, mutate):
    x = _dn_input(rng, budget, mutate)
    ring = x[0].ring
    n = len(x)
    return {
        "x": x,
        "B": random_coeff_matrix(ring, n, n, rng),
        "y": _arbitrary_vector(concrete_ring(rng), _dims(rng, budget, 1), rng),
    }


def _p7_check(case):
    x, B = case["x"], case["B"]
    if not _bilinear(B, x, x).is_zero():
        return "phi(x, x) != 0"
    sym = B + B.transpose()
    if not _bilinear(sym, x, x).is_zero():
        return "symmetric psi(x, x) != 0"
    y = case["y"]
    family_zero = all((y[i] * y[k]).is_zero() for i in range(len(y)) for k in range(len(y)))
    if family_zero != is_in_D(y):
        return "bilinear family x_i y_k disagrees with D(n) membership"
    return None


def _p8_sample(rng, budget, mutate):
    x = _dn_input(rng, budget, mutate)
    ring = x[0].ring
    m = len(x)
    T, Tinv = unimodular_pair(ring, m, rng)
    case = {"x": x, "T": T, "Tinv": Tinv, "phi": random_coeffs(ring, m, rng)}
    if isinstance(ring, NilpotentExt):
        k = _dims(rng, budget, 1)
        case["z"] = random_dn(ring, k, rng)
        case["f"] = random_coeff_matrix(ring, m, k, rng)
    return case


def _p8_check(case):
    x, phi = case["x"], case["phi"]
    # D(m) inside D_s: witnessed by the identity map
    if not is_in_D(x):
        return "x not in D(m), so the identity does not witness D_s membership"
    if not (_dot(phi, x) ** 2).is_zero():
        return "phi(x) is not in D"
    if "z" in case:
        v = mat_vec(case["f"], case["z"])
        if not (_dot(phi, v) ** 2).is_zero():
            return "f(z) with z in D(k) fails a functional (D_s not inside D_w)"
    # V = R^m with the basis given by the columns of T
    v = mat_vec(case["T"], x)
    if mat_vec(case["Tinv"], v) != x:
        return "basis change is not invertible"
    if not (_dot(phi, v) ** 2).is_zero():
        return "weak membership fails after basis change"
    if not is_in_D(mat_vec(case["Tinv"], v)):
        return "coordinates of a weak member are not in D(m)"
    return None


def _p9_sample(rng, budget, mutate):
    F = _dtilde_input(rng, budget, mutate)
    ring = F.ring
    r2 = concrete_ring(rng)
    return {
        "F": F,
        "v": random_coeffs(ring, F.cols, rng),
        "y": random_coeffs(ring, F.rows, rng),
        "G": _arbitrary_matrix(r2, _dims(rng, budget), _dims(rng, budget), rng),
    }


def _p9_check(case):
    F = case["F"]
    Fv = mat_vec(F, case["v"])
    if not is_in_D(Fv):
        return "F(v) not in D(W)"
    if not (_dot(case["y"], Fv) ** 2).is_zero():
        return "y(F(v)) not in D"
    G = case["G"]
    if dtilde_by_columns(G) != is_in_dtilde(G):
        return "column witnesses disagree with D~ membership on G"
    return None


def _p10_sample(rng, budget, mutate):
    F = _dtilde_input(rng, budget, mutate)
    ring = F.ring
    TV, TVinv = unimodular_pair(ring, F.cols, rng)
    TW, TWinv = unimodular_pair(ring, F.rows, rng)
    return {
        "F": F,
        "P": random_coeff_matrix(ring, _dims(rng, budget, 1), F.rows, rng),
        "Q": random_coeff_matrix(ring, F.cols, _dims(rng, budget, 1), rng),
        "TV": TV,
        "TWinv": TWinv,
    }


def _p10_check(case):
    F = case["F"]
    if not is_in_dtilde(mat_mul(mat_mul(case["P"], F), case["Q"])):
        return "P.F.Q left D~"
    if not is_in_dtilde(mat_mul(mat_mul(case["TWinv"], F), case["TV"])):
        return "matrix of F in another basis left D~"
    return None


def _p11_sample(rng, budget, mutate):
    X_ = _special_input(rng, budget, mutate)
    ring = X_.ring
    n = X_.rows
    return {
        "X": X_,
        "j": rng.randrange(n),
        "lam": random_rational(ring, rng),
        "mu": random_rational(ring, rng),
        "w": [random_scalar(ring, rng) for _ in range(n)],
    }


def _perms_to_check(n: int):
    if n <= 3:
        return list(permutations(range(n)))
    swaps = []
    for i, k in combinations(range(n), 2):
        p = list(range(n))
        p[i], p[k] = p[k], p[i]
        swaps.append(tuple(p))
    return swaps


def _p11_check(case):
    X_ = case["X"]
    n = X_.rows
    base = mult_trace(X_)
    for perm in _perms_to_check(n):
        sign = permutation_sign(perm)
        if mult_trace(X_.permute_cols(perm)) != sign * base:
            return f"column permutation {perm} does not act by its sign"
        if mult_trace(X_.permute_rows(perm)) != sign * base:
            return f"row permutation {perm} does not act by its sign"
    j, lam, mu, w = case["j"], case["lam"], case["mu"], case["w"]
    mixed = [lam * x + mu * y for x, y in zip(X_.col(j), w)]
    lhs = mult_trace(_with_column(X_, j, mixed))
    rhs = lam * base + mu * mult_trace(_with_column(X_, j, w))
    if lhs != rhs:
        return f"tr_m is not linear in column {j + 1}"
    return None


def _with_column(X_: Matrix, j: int, values) -> Matrix:
    rows = X_.row_list()
    for r, v in zip(rows, values):
        r[j] = v
    return Matrix(X_.ring, rows)


def _c1_sample(rng, budget, mutate):
    return {"X": _special_input(rng, budget, mutate)}


def _c1_check(case):
    X_ = case["X"]
    n = X_.rows
    lhs, rhs = det(X_), factorial(n) * mult_trace(X_)
    if lhs != rhs:
        return f"det = {lhs} but n!*tr_m = {rhs}"
    return None


def _p12_sample(rng, budget, mutate):
    X_ = _dtilde_input(rng, budget, mutate)
    comps = random_polymap_components(X_.rows, rng.randint(1, 2), budget.max_degree, rng)
    if mutate:
        comps[0] = comps[0] + Polynomial.monomial([u(1), u(1)], 1)
    return {"X": X_, "g": PolyMap(X_.rows, comps), "a": random_coeffs(X_.ring, X_.cols, rng)}


def _xlin_check(case):
    X_, g, coeffs = case["X"], case["g"], case["a"]
    lhs = g(mat_vec(X_, coeffs))
    rhs = mat_vec(apply_polymap_columns(g, X_), coeffs)
    for k, (p, q) in enumerate(zip(lhs, rhs)):
        if p != q:
            return f"component {k + 1}: g(X.a) = {p} but (g.X).a = {q}"
    return None


def _remainder_components(m: int, l: int, rng: random.Random) -> list[Polynomial]:
    """``g = linear + g2(u, u) * k(u)`` with g2 symmetric and ``deg k <= 1``."""
    comps = []
    for _ in range(l):
        lin = sum((Polynomial.var(u(j)).scale(small_fraction(rng)) for j in range(1, m + 1)), Polynomial())
        quad = Polynomial()
        for j, j2 in combinations_with_replacement(range(1, m + 1), 2):
            quad = quad + Polynomial.monomial([u(j), u(j2)], small_fraction(rng))
        k_poly = Polynomial.const(small_fraction(rng)) + sum(
            (Polynomial.var(u(j)).scale(small_fraction(rng)) for j in range(1, m + 1)), Polynomial()
        )
        comps.append(lin + quad * k_poly)
    return comps


def _p13_sample(rng, budget, mutate):
    X_ = _dtilde_input(rng, budget, mutate)
    comps = _remainder_components(X_.rows, rng.randint(1, 2), rng)
    if mutate:
        comps[0] = comps[0] + Polynomial.monomial([u(1), u(1)], 1)
    comps = [c if not c.is_zero() else Polynomial.var(u(1)) for c in comps]
    return {"X": X_, "g": PolyMap(X_.rows, comps), "a": random_coeffs(X_.ring, X_.cols, rng)}


# ---------------------------------------------------------------- symbolic checks


def _grids(budget: Budget) -> list[tuple[int, int]]:
    top = budget.symbolic_max_dim
    return [(m, n) for m in range(2, top + 1) for n in range(2, top + 1)]


class _Params:
    """Hands out fresh parameter indices."""

    def __init__(self, ring):
        self.ring = ring
        self.next = 1

    def take(self, k: int) -> list[Elem]:
        out = [self.ring.param(r) for r in range(self.next, self.next + k)]
        self.next += k
        return out

    def matrix(self, m: int, n: int) -> Matrix:
        vals = self.take(m * n)
        return Matrix(self.ring, [vals[i * n:(i + 1) * n] for i in range(m)])


def _generic(m: int, n: int, params: int, mutate: bool, ideal: str = "dtilde") -> Matrix:
    G = generic_matrix(m, n, ideal, params=params)
    if mutate:
        G = shift_by_identity(G) if ideal == "special" else G.replace(0, 0, G[0, 0] + 1)
    return G


def _zero_or(label: str, value: Elem) -> Failure:
    return None if value.is_zero() else f"{label} reduces to {value}, not 0"


def _dtilde_equations(X_: Matrix) -> Iterator[Elem]:
    m, n = X_.shape
    e = X_.entries
    if m == 1 or n == 1:
        vec = X_.row(0) if m == 1 else X_.col(0)
        for j in range(len(vec)):
            for k in range(j, len(vec)):
                yield vec[j] * vec[k]
        return
    for i in range(m):
        for i2 in range(i, m):
            for j in range(n):
                for j2 in range(j, n):
                    yield e[i][j] * e[i2][j2] + e[i2][j] * e[i][j2]


def _first_nonzero(label: str, values) -> Failure:
    for v in values:
        if not v.is_zero():
            return f"{label}: {v} does not reduce to 0"
    return None


def _d_products(vec: Sequence[Elem]) -> Iterator[Elem]:
    for j in range(len(vec)):
        for k in range(j, len(vec)):
            yield vec[j] * vec[k]


def _p1_symbolic(budget, mutate):
    for m, n in _grids(budget):
        G = _generic(m, n, m + n, mutate)
        ps = _Params(G.ring)
        c, d = ps.take(m), ps.take(n)
        yield f"{m}x{n} row", _first_nonzero(
            "adjoined row", _dtilde_equations(G.with_row(linear_combination(G.row_list(), c)))
        )
        yield f"{m}x{n} col", _first_nonzero(
            "adjoined column", _dtilde_equations(G.with_col(linear_combination(G.col_list(), d)))
        )


def _p2_symbolic(budget, mutate):
    for m, n in _grids(budget):
        G = _generic(m, n, m + n, mutate)
        ps = _Params(G.ring)
        c, d = ps.take(m), ps.take(n)
        yield f"{m}x{n} rows", _first_nonzero("row", (v for r in G.row_list() for v in _d_products(r)))
        yield f"{m}x{n} row combination", _first_nonzero(
            "row combination", _d_products(linear_combination(G.row_list(), c))
        )
        yield f"{m}x{n} column combination", _first_nonzero(
            "column combination", _d_products(linear_combination(G.col_list(), d))
        )


def _neighbour_ideal(m: int, n: int, by_rows: bool, drop_neighbours: bool = False) -> IdealSpec:
    """Ideal cut out by 'rows in D(n) and pairwise neighbours' on the free matrix."""
    E = free_matrix_entries(m, n)
    vecs = E if by_rows else [list(col) for col in zip(*E)]
    gens = []
    for r in vecs:
        gens += [r[j] * r[k] for j in range(len(r)) for k in range(j, len(r))]
    if not drop_neighbours:
        for r, s in combinations(vecs, 2):
            diff = [p - q for p, q in zip(r, s)]
            gens += [diff[j] * diff[k] for j in range(len(diff)) for k in range(j, len(diff))]
    return IdealSpec.generated_by(m, n, gens)


def _p3_symbolic(budget, mutate):
    for m, n in _grids(budget):
        G = _generic(m, n, m + n, mutate)
        ps = _Params(G.ring)
        c, d = ps.take(m), ps.take(n)
        yield f"{m}x{n} 1=>2'", _first_nonzero("row combination", _d_products(linear_combination(G.row_list(), c)))
        yield f"{m}x{n} 1=>3'", _first_nonzero("column combination", _d_products(linear_combination(G.col_list(), d)))
        rows_ok = rows_condition(G)
        yield f"{m}x{n} 1=>2", None if rows_ok else "generic rows are not mutual neighbours"
        full = IdealSpec.full_dtilde(m, n)
        for by_rows, name in ((True, "2<=>1"), (False, "3<=>1")):
            ideal = _neighbour_ideal(m, n, by_rows, drop_neighbours=mutate)
            yield f"{m}x{n} {name}", None if ideals_equal(ideal, full) else f"{name}: ideals differ"


def _vector_generic(n: int, params: int, mutate: bool) -> list[Elem]:
    vec = generic_matrix(1, n, "dtilde", params=params).row(0)
    if mutate:
        vec[0] = vec[0] + 1
    return vec


def _witness_ideal(n: int, mutate: bool) -> IdealSpec:
    E = free_matrix_entries(1, n)[0]
    ws = functional_witnesses(n)
    if mutate:
        ws = ws[:n]
    gens = []
    for w in ws:
        lin = sum((e.scale(c) for e, c in zip(E, w)), Polynomial())
        gens.append(lin * lin)
    return IdealSpec.generated_by(1, n, gens)


def _p4_symbolic(budget, mutate):
    for n in range(1, budget.symbolic_max_dim + 2):
        x = _vector_generic(n, n, mutate)
        alpha = _Params(x[0].ring).take(n)
        yield f"n={n} forward", _zero_or("alpha(x)^2", _dot(alpha, x) ** 2)
        ok = ideals_equal(_witness_ideal(n, mutate), IdealSpec.full_dtilde(1, n))
        yield f"n={n} converse", None if ok else "witness functionals do not cut out D(n)"


def _p5_symbolic(budget, mutate):
    for n in range(1, budget.symbolic_max_dim + 1):
        for m in range(1, budget.symbolic_max_dim + 1):
            x = _vector_generic(n, m * n, mutate)
            F = _Params(x[0].ring).matrix(m, n)
            yield f"{m}x{n}", _first_nonzero("f(x)", _d_products(mat_vec(F, x)))


def _p6_symbolic(budget, mutate):
    for m, n in _grids(budget):
        p = q = 2
        G = _generic(m, n, p * m + n * q, mutate)
        ps = _Params(G.ring)
        P, Q = ps.matrix(p, m), ps.matrix(n, q)
        yield f"{m}x{n} P.X", _first_nonzero("P.X", _dtilde_equations(mat_mul(P, G)))
        yield f"{m}x{n} X.Q", _first_nonzero("X.Q", _dtilde_equations(mat_mul(G, Q)))


def _p7_symbolic(budget, mutate):
    for n in range(1, budget.symbolic_max_dim + 2):
        sym_count = n * (n + 1) // 2
        x = _vector_generic(n, n * n + sym_count, mutate)
        ring = x[0].ring
        ps = _Params(ring)
        B = ps.matrix(n, n)
        yield f"n={n} bilinear", _zero_or("phi(x, x)", _bilinear(B, x, x))
        svals = ps.take(sym_count)
        S = [[None] * n for _ in range(n)]
        it = iter(svals)
        for j in range(n):
            for k in range(j, n):
                S[j][k] = S[k][j] = next(it)
        yield f"n={n} symmetric", _zero_or("psi(x, x)", _bilinear(Matrix(ring, S), x, x))
        # any bilinear form agrees with its symmetric part on the diagonal
        E = free_matrix_entries(1, n)[0]
        cs = [[Polynomial.var(a(j * n + k + 1)) for k in range(n)] for j in range(n)]
        phi = sum((cs[j][k] * E[j] * E[k] for j in range(n) for k in range(n)), Polynomial())
        psi = sum(((cs[j][k] + cs[k][j]) * E[j] * E[k] for j in range(n) for k in range(n)), Polynomial())
        yield f"n={n} 2<=>3", None if phi == psi.scale(Fraction(1, 2)) else "phi != psi on the diagonal"
        family = [E[i] * E[k] for i in range(n) for k in range(n)]
        if mutate:
            family = [E[i] * E[i] for i in range(n)]
        ok = ideals_equal(IdealSpec.generated_by(1, n, family), IdealSpec.full_dtilde(1, n))
        yield f"n={n} 2=>1", None if ok else "bilinear family does not cut out D(n)"


def _p8_symbolic(budget, mutate):
    for m in range(1, budget.symbolic_max_dim + 1):
        for k in range(1, budget.symbolic_max_dim + 1):
            z = _vector_generic(k, m * k + m, mutate)
            ps = _Params(z[0].ring)
            f, phi = ps.matrix(m, k), ps.take(m)
            yield f"m={m} k={k} D_s<=D_w", _zero_or("phi(f(z))^2", _dot(phi, mat_vec(f, z)) ** 2)
        x = _vector_generic(m, 0, mutate)
        yield f"m={m} D<=D_s", None if is_in_D(x) else "identity witness fails"
        ok = ideals_equal(_witness_ideal(m, mutate), IdealSpec.full_dtilde(1, m))
        yield f"m={m} D_w<=D", None if ok else "weak membership does not imply D(m)"


def _column_witness_ideal(m: int, n: int, mutate: bool) -> IdealSpec:
    E = free_matrix_entries(m, n)
    ws = functional_witnesses(n)
    if mutate:
        ws = ws[:n]
    gens = []
    for w in ws:
        v = [sum((row[j].scale(w[j]) for j in range(n)), Polynomial()) for row in E]
        gens += [v[i] * v[k] for i in range(m) for k in range(i, m)]
    return IdealSpec.generated_by(m, n, gens)


def _p9_symbolic(budget, mutate):
    for m, n in _grids(budget):
        G = _generic(m, n, m + n, mutate)
        ps = _Params(G.ring)
        v, y = ps.take(n), ps.take(m)
        Fv = mat_vec(G, v)
        yield f"{m}x{n} F(v) in D(W)", _first_nonzero("F(v)", _d_products(Fv))
        yield f"{m}x{n} y(F(v)) in D", _zero_or("y(F(v))^2", _dot(y, Fv) ** 2)
        ok = ideals_equal(_column_witness_ideal(m, n, mutate), IdealSpec.full_dtilde(m, n))
        yield f"{m}x{n} 1=>3", None if ok else "column witnesses do not cut out D~"


def _p10_symbolic(budget, mutate):
    for m, n in _grids(budget):
        p = q = 2
        G = _generic(m, n, p * m + n * q, mutate)
        ps = _Params(G.ring)
        P, Q = ps.matrix(p, m), ps.matrix(n, q)
        yield f"{m}x{n} P.F.Q", _first_nonzero("P.F.Q", _dtilde_equations(mat_mul(mat_mul(P, G), Q)))


def _p11_symbolic(budget, mutate):
    for n in range(2, budget.symbolic_max_dim + 1):
        for ideal in ("special", "dtilde"):
            G = _generic(n, n, n + 2, mutate, ideal)
            base = mult_trace(G)
            for perm in permutations(range(n)):
                sign = permutation_sign(perm)
                yield f"{ideal} n={n} cols {perm}", _zero_or(
                    "tr_m(X^sigma) - sign*tr_m(X)", mult_trace(G.permute_cols(perm)) - sign * base
                )
                yield f"{ideal} n={n} rows {perm}", _zero_or(
                    "tr_m(sigma X) - sign*tr_m(X)", mult_trace(G.permute_rows(perm)) - sign * base
                )
            ps = _Params(G.ring)
            w = ps.take(n)
            lam, mu = ps.take(2)
            mixed = [lam * x + mu * y for x, y in zip(G.col(0), w)]
            yield f"{ideal} n={n} multilinear", _zero_or(
                "linearity defect",
                mult_trace(_with_column(G, 0, mixed)) - lam * base - mu * mult_trace(_with_column(G, 0, w)),
            )


def _c1_symbolic(budget, mutate):
    for n in range(2, budget.symbolic_max_dim + 1):
        G = _generic(n, n, 0, mutate)
        yield f"n={n} FullDtilde", _zero_or("det - n!*tr_m", det(G) - factorial(n) * mult_trace(G))
        S = _generic(n, n, 0, mutate, "special")
        yield f"n={n} SpecialOnly ring", _zero_or("det - n!*tr_m", det(S) - factorial(n) * mult_trace(S))
        E = free_matrix_entries(n, n)
        if mutate:
            for i in range(n):
                E[i][i] = E[i][i] + 1
        diag = Polynomial.const(1)
        for i in range(n):
            diag = diag * E[i][i]
        diff = _leibniz(E) - diag.scale(factorial(n))
        ok = membership_oracle(diff, IdealSpec.special_only(n))
        yield f"n={n} SpecialOnly oracle", None if ok else "det - n!*tr_m is not in J_special"


def _leibniz(E: list[list[Polynomial]]) -> Polynomial:
    total = Polynomial()
    for perm in permutations(range(len(E))):
        term = Polynomial.const(permutation_sign(perm))
        for i, j in enumerate(perm):
            term = term * E[i][j]
        total = total + term
    return total


def _param_polymap(m: int, l: int, degree: int, ps: _Params) -> tuple[PolyMap, int]:
    comps = []
    for _ in range(l):
        p = Polynomial()
        for d in range(1, degree + 1):
            for mono in combinations_with_replacement(range(1, m + 1), d):
                r = ps.next
                ps.next += 1
                p = p + Polynomial.monomial([a(r)] + [u(k) for k in mono])
        comps.append(p)
    return PolyMap(m, comps), ps.next


def _polymap_param_count(m: int, l: int, degree: int) -> int:
    return l * sum(len(list(combinations_with_replacement(range(m), d))) for d in range(1, degree + 1))


def _xlin_symbolic_case(G: Matrix, g: PolyMap, coeffs: list[Elem], label: str):
    lhs = g(mat_vec(G, coeffs))
    rhs = mat_vec(apply_polymap_columns(g, G), coeffs)
    return label, _first_nonzero("g(X.a) - (g.X).a", (p - q for p, q in zip(lhs, rhs)))


def _xlin_shapes(budget):
    return [(2, 2, 1), (2, 3, 1), (3, 2, 1), (2, 2, 2)][: 4 if budget.symbolic_max_dim >= 3 else 1]


def _p12_symbolic(budget, mutate):
    for m, n, l in _xlin_shapes(budget):
        for degree in range(1, budget.max_degree + 1):
            count = _polymap_param_count(m, l, degree) + n
            G = _generic(m, n, count, mutate)
            ps = _Params(G.ring)
            g, _ = _param_polymap(m, l, degree, ps)
            coeffs = ps.take(n)
            yield _xlin_symbolic_case(G, g, coeffs, f"{m}x{n} l={l} deg={degree}")


def _p13_symbolic(budget, mutate):
    for m, n, l in _xlin_shapes(budget):
        sym = m * (m + 1) // 2
        count = l * (2 * m + sym + 1) + n
        G = _generic(m, n, count, mutate)
        ps = _Params(G.ring)
        comps = []
        for _ in range(l):
            lin = sum((Polynomial.var(a(ps.next + j)) * Polynomial.var(u(j + 1)) for j in range(m)), Polynomial())
            ps.next += m
            quad = Polynomial()
            for j, j2 in combinations_with_replacement(range(1, m + 1), 2):
                quad = quad + Polynomial.monomial([a(ps.next), u(j), u(j2)])
                ps.next += 1
            k_poly = Polynomial.var(a(ps.next))
            ps.next += 1
            for j in range(1, m + 1):
                k_poly = k_poly + Polynomial.monomial([a(ps.next), u(j)])
                ps.next += 1
            comps.append(lin + quad * k_poly)
        coeffs = ps.take(n)
        yield _xlin_symbolic_case(G, PolyMap(m, comps), coeffs, f"{m}x{n} l={l} deg(k)<=1")


# ---------------------------------------------------------------- registry


PROPOSITIONS: dict[str, Proposition] = {
    p.id: p
    for p in (
        Proposition(
            "P1-RowAdjoin",
            "Adjoining a linear combination of the rows (or columns) of a D~ matrix stays in D~.",
            _p1_sample,
            _p1_check,
            _p1_symbolic,
        ),
        Proposition(
            "P2-LinComb",
            "Rows, columns and their linear combinations of a D~ matrix lie in D.",
            _p1_sample,
            _p2_check,
            _p2_symbolic,
        ),
        Proposition(
            "P3-Geometric",
            "D~ membership is equivalent to rows (columns) being mutual neighbours of each other and of 0.",
            _p3_sample,
            _p3_check,
            _p3_symbolic,
        ),
        Proposition(
            "P4-LinearFunctional",
            "x is in D(n) iff every linear functional sends x into D.",
            _p4_sample,
            _p4_check,
            _p4_symbolic,
        ),
        Proposition(
            "P5-LinearImage",
            "Linear maps send D(n) into D(m).",
            _p5_sample,
            _p5_check,
            _p5_symbolic,
        ),
        Proposition(
            "P6-IdealProperty",
            "P.X and X.Q are in D~ whenever X is.",
            _p6_sample,
            _p6_check,
            _p6_symbolic,
        ),
        Proposition(
            "P7-Bilinear",
            "x is in D(n) iff every (symmetric) bilinear form vanishes on (x, x).",
            _p7_sample,
            _p7_check,
            _p7_symbolic,
        ),
        Proposition(
            "P8-DV",
            "Strong and weak D(V) agree on coordinate spaces and equal D(m).",
            _p8_sample,
            _p8_check,
            _p8_symbolic,
            notes=("checked for R^m with explicit bases; arbitrary modules are out of reach",),
        ),
        Proposition(
            "P9-DVW",
            "F is in D~(m, n) iff F(v) is in D(W) for all v iff y(F(v)) is in D for all v, y.",
            _p9_sample,
            _p9_check,
            _p9_symbolic,
        ),
        Proposition(
            "P10-CoordFreeIdeal",
            "P.F.Q is in D~ whenever F is, in any choice of bases.",
            _p10_sample,
            _p10_check,
            _p10_symbolic,
        ),
        Proposition(
            "P11-TrmAlternating",
            "On special matrices the multiplicative trace is multilinear and alternating in columns and rows.",
            _p11_sample,
            _p11_check,
            _p11_symbolic,
        ),
        Proposition(
            "C1-DetTrace",
            "det(X) = n! tr_m(X) for special X.",
            _c1_sample,
            _c1_check,
            _c1_symbolic,
        ),
        Proposition(
            "P12-Xlin",
            "Zero-preserving polynomial maps preserve linear combinations of the columns of a D~ matrix.",
            _p12_sample,
            _xlin_check,
            _p12_symbolic,
        ),
        Proposition(
            "P13-RemainderForm",
            "Maps of the form linear + g2(u, u) k(u) preserve linear combinations of D~ columns.",
            _p13_sample,
            _xlin_check,
            _p13_symbolic,
        ),
    )
}


def case_rng(seed: int, prop_id: str, index: int, mutate: bool = False) -> random.Random:
    return random.Random(f"{seed}:{prop_id}:{index}:{int(mutate)}")


def replay_case(prop_id: str, seed: int, index: int, budget: Budget | None = None, mutate: bool = False) -> Case:
    """Rebuild the input of randomized case ``index``."""
    budget = budget or Budget(seed=seed)
    return PROPOSITIONS[prop_id].sample(case_rng(seed, prop_id, index, mutate), budget, mutate)


def _run_randomized(prop: Proposition, budget: Budget, mutate: bool) -> PropositionReport:
    if budget.cases == 0:
        return PropositionReport(prop.id, "randomized", 0, "skipped", reason="zero-case budget",
                                 seed=budget.seed, mutated=mutate)
    for index in range(budget.cases):
        case = prop.sample(case_rng(budget.seed, prop.id, index, mutate), budget, mutate)
        failure = prop.check(case)
        if failure is not None:
            return PropositionReport(
                prop.id,
                "randomized",
                index + 1,
                "fail",
                counterexample={"case": index, "failure": failure, "inputs": serialize_case(case)},
                seed=budget.seed,
                mutated=mutate,
            )
    return PropositionReport(prop.id, "randomized", budget.cases, "pass", seed=budget.seed, mutated=mutate)


def _run_symbolic(prop: Proposition, budget: Budget, mutate: bool) -> PropositionReport:
    count = 0
    for label, failure in prop.symbolic(budget, mutate):
        count += 1
        if failure is not None:
            return PropositionReport(
                prop.id,
                "symbolic",
                count,
                "fail",
                counterexample={"case": label, "failure": failure},
                mutated=mutate,
                notes=list(prop.notes),
            )
    return PropositionReport(prop.id, "symbolic", count, "pass", mutated=mutate, notes=list(prop.notes))


def verify(prop_id: str, mode: str, budget: Budget | None = None, mutate: bool = False) -> PropositionReport:
    budget = budget or Budget()
    budget.validate()
    if prop_id not in PROPOSITIONS:
        raise ConfigError(f"unknown proposition id {prop_id!r}")
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}")
    prop = PROPOSITIONS[prop_id]
    if mode == "randomized":
        return _run_randomized(prop, budget, mutate)
    return _run_symbolic(prop, budget, mutate)


def verify_all(
    budget: Budget | None = None,
    modes: Sequence[str] = MODES,
    ids: Sequence[str] = PROPOSITION_IDS,
    mutate: bool = False,
) -> list[PropositionReport]:
    budget = budget or Budget()
    return [verify(pid, mode, budget, mutate) for pid in ids for mode in modes]
