"""Random inputs for randomized proposition checks.

Samplers for constrained inputs (vectors in D(n), matrices in D~, special
matrices) build their output from a structure known to satisfy the
constraint and then confirm it with the predicate, so a sampler bug surfaces
as an exception rather than as a vacuous pass.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from nilmat.matrices import Matrix, is_in_D, is_in_dtilde, is_special, mat_mul
from nilmat.poly import Polynomial, X, u
from nilmat.quotient import generic_matrix
from nilmat.rings import Elem, IntegersMod, NilpotentExt, PolynomialQuotient, Ring, ring_make

CONCRETE_RINGS = (
    "nil:Q:1",
    "nil:Q:2",
    "nil:Q:3",
    "nil:Q:4",
    "nil:Zmod:9:1",
    "nil:Zmod:9:2",
    "nil:Zmod:9:3",
)


class SamplerError(RuntimeError):
    """A sampler produced an input violating its own hypothesis."""


def small_fraction(rng: random.Random, nonzero: bool = False) -> Fraction:
    # denominators are powers of 2, which are units in every supported base ring
    while True:
        q = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 1, 2, 4)))
        if q or not nonzero:
            return q


def concrete_ring(rng: random.Random) -> Ring:
    return ring_make(rng.choice(CONCRETE_RINGS))


def _base_value(ring: Ring, rng: random.Random):
    if isinstance(ring, IntegersMod):
        return rng.randrange(ring.modulus)
    return small_fraction(rng)


def random_scalar(ring: Ring, rng: random.Random) -> Elem:
    """An unconstrained element."""
    if isinstance(ring, NilpotentExt):
        return ring.make(
            _base_value(ring.base, rng),
            [_base_value(ring.base, rng) if rng.random() < 0.6 else 0 for _ in range(ring.k)],
        )
    if isinstance(ring, PolynomialQuotient) and ring.ideal is not None:
        p = Polynomial.const(small_fraction(rng))
        for _ in range(rng.randint(0, 2)):
            p = p + Polynomial.var(X(rng.randint(1, ring.m), rng.randint(1, ring.n))).scale(small_fraction(rng))
        return ring.from_polynomial(p)
    return ring(_base_value(ring, rng))


def random_rational(ring: Ring, rng: random.Random) -> Elem:
    """A constant from the prime field, as an element of ``ring``."""
    return ring(small_fraction(rng))


def _nilpotent(ring: NilpotentExt, rng: random.Random, step: int = 1) -> Elem:
    coeffs = [step * rng.randint(-3, 3) if rng.random() < 0.7 else 0 for _ in range(ring.k)]
    return ring.make(0, coeffs)


def _triple_multiple(ring: NilpotentExt, rng: random.Random) -> Elem:
    # 3 * (anything) in Zmod:9 extensions; all such products vanish
    return ring.make(3 * rng.randrange(3), [3 * rng.randrange(3) for _ in range(ring.k)])


def _nilpotent_like(ring: NilpotentExt, rng: random.Random, mode: int) -> Elem:
    if mode == 1 and isinstance(ring.base, IntegersMod) and ring.base.modulus % 3 == 0:
        return _triple_multiple(ring, rng)
    return _nilpotent(ring, rng)


def random_matrix(ring: Ring, m: int, n: int, rng: random.Random) -> Matrix:
    return Matrix(ring, [[random_scalar(ring, rng) for _ in range(n)] for _ in range(m)])


def random_rational_matrix(ring: Ring, m: int, n: int, rng: random.Random) -> Matrix:
    return Matrix(ring, [[random_rational(ring, rng) for _ in range(n)] for _ in range(m)])


def random_coeff_matrix(ring: Ring, m: int, n: int, rng: random.Random) -> Matrix:
    """Coefficients for linear maps: ring elements over concrete rings, rationals otherwise."""
    if isinstance(ring, PolynomialQuotient):
        return random_rational_matrix(ring, m, n, rng)
    return random_matrix(ring, m, n, rng)


def random_coeffs(ring: Ring, k: int, rng: random.Random) -> list[Elem]:
    return random_coeff_matrix(ring, 1, k, rng).row(0)


def _generic_image(m: int, n: int, rng: random.Random, ideal: str = "dtilde") -> Matrix:
    r = rng.randint(1, 3) if ideal == "dtilde" else rng.randint(2, 3)
    s = rng.randint(1, 3) if ideal == "dtilde" else r
    G = generic_matrix(r, s, ideal)
    P = random_rational_matrix(G.ring, m, r, rng)
    Q = random_rational_matrix(G.ring, s, n, rng)
    return mat_mul(mat_mul(P, G), Q)


def random_dtilde(ring: Ring | None, m: int, n: int, rng: random.Random) -> Matrix:
    """A matrix in D~(m, n); ``ring=None`` draws from a generic algebra."""
    if ring is None:
        X_ = _generic_image(m, n, rng)
    else:
        if not isinstance(ring, NilpotentExt):
            raise ValueError(f"no D~ sampler for {ring.spec}")
        mode = rng.randrange(4)
        if mode in (0, 1):
            X_ = Matrix(ring, [[_nilpotent_like(ring, rng, mode) for _ in range(n)] for _ in range(m)])
        elif mode == 2:
            col = random_dn(ring, m, rng)
            row = [random_scalar(ring, rng) for _ in range(n)]
            X_ = Matrix(ring, [[c * r for r in row] for c in col])
        else:
            d = _nilpotent_like(ring, rng, rng.randrange(2))
            X_ = Matrix(ring, [[d] * n for _ in range(m)])
    if not is_in_dtilde(X_):
        raise SamplerError(f"sampled matrix {X_} is not in D~")
    return X_


def random_dn(ring: Ring | None, n: int, rng: random.Random) -> list[Elem]:
    """A vector in D(n)."""
    if ring is None:
        vec = _generic_image(1, n, rng).row(0)
    else:
        mode = rng.randrange(2)
        vec = [_nilpotent_like(ring, rng, mode) for _ in range(n)]
    if not is_in_D(vec):
        raise SamplerError(f"sampled vector {vec} is not in D(n)")
    return vec


def _special_constant_2x2(ring: Ring, rng: random.Random) -> list[list[Elem]]:
    # a*d + b*c = 0 with a a unit
    a_ = random_rational(ring, rng)
    while not _is_unit_constant(a_):
        a_ = random_rational(ring, rng)
    b, c = random_rational(ring, rng), random_rational(ring, rng)
    inv = _constant_inverse(a_)
    return [[a_, b], [c, -(b * c) * inv]]


def _is_unit_constant(x: Elem) -> bool:
    ring = x.ring
    base = ring.base if isinstance(ring, NilpotentExt) else ring
    value = x.value[0] if isinstance(ring, NilpotentExt) else x.value
    if isinstance(base, IntegersMod):
        from math import gcd

        return gcd(value, base.modulus) == 1
    return value != 0


def _constant_inverse(x: Elem) -> Elem:
    ring = x.ring
    base = ring.base if isinstance(ring, NilpotentExt) else ring
    value = x.value[0] if isinstance(ring, NilpotentExt) else x.value
    if isinstance(base, IntegersMod):
        return ring(pow(value, -1, base.modulus))
    return ring(1 / Fraction(value))


def random_special(ring: Ring | None, n: int, rng: random.Random) -> Matrix:
    """A special ``n x n`` matrix; ``ring=None`` draws from a generic algebra.

    Concrete draws are either D~ members or a constant special 2x2 block with
    nilpotent entries elsewhere chosen to keep every 2x2 minor special.
    """
    if ring is None:
        if rng.random() < 0.5:
            X_ = _generic_image(n, n, rng)
        else:
            G = generic_matrix(n, n, "special")
            perm_r = rng.sample(range(n), n)
            perm_c = rng.sample(range(n), n)
            scale_r = [small_fraction(rng, nonzero=True) for _ in range(n)]
            scale_c = [small_fraction(rng, nonzero=True) for _ in range(n)]
            X_ = Matrix(
                G.ring,
                [[G[perm_r[i], perm_c[j]] * (scale_r[i] * scale_c[j]) for j in range(n)] for i in range(n)],
            )
    elif n == 2 and rng.random() < 0.5:
        X_ = Matrix(ring, _special_constant_2x2(ring, rng))
    else:
        X_ = random_dtilde(ring, n, n, rng)
    if not is_special(X_):
        raise SamplerError(f"sampled matrix {X_} is not special")
    return X_


def unimodular_pair(ring: Ring, n: int, rng: random.Random, steps: int = 4) -> tuple[Matrix, Matrix]:
    """An integer matrix with determinant +-1 and its inverse."""
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    Tinv = [row[:] for row in T]
    for _ in range(steps):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        # T <- T * (I + c E_ij), Tinv <- (I - c E_ij) * Tinv
        for r in range(n):
            T[r][j] += c * T[r][i]
        for k in range(n):
            Tinv[i][k] -= c * Tinv[j][k]
    return Matrix(ring, T), Matrix(ring, Tinv)


def corrupt(X_: Matrix, rng: random.Random) -> Matrix:
    """Add 1 to one entry; a unit entry can never sit in a D~ matrix."""
    i, j = rng.randrange(X_.rows), rng.randrange(X_.cols)
    return X_.replace(i, j, X_[i, j] + 1)


def corrupt_vector(vec: Sequence[Elem], rng: random.Random) -> list[Elem]:
    vec = list(vec)
    k = rng.randrange(len(vec))
    vec[k] = vec[k] + 1
    return vec


def shift_by_identity(X_: Matrix) -> Matrix:
    m, n = X_.shape
    return Matrix(X_.ring, [[X_[i, j] + int(i == j) for j in range(n)] for i in range(m)])


def random_polymap_components(m: int, l: int, max_degree: int, rng: random.Random) -> list[Polynomial]:
    """Zero-preserving components with small rational coefficients."""
    from itertools import combinations_with_replacement

    comps = []
    for _ in range(l):
        p = Polynomial()
        for d in range(1, max_degree + 1):
            for mono in combinations_with_replacement(range(1, m + 1), d):
                if rng.random() < 0.6:
                    p = p + Polynomial.monomial([u(k) for k in mono], small_fraction(rng))
        if p.is_zero():
            p = Polynomial.var(u(rng.randint(1, m)))
        comps.append(p)
    return comps
