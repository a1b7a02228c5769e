import random
import time
from itertools import combinations_with_replacement
from math import comb

import pytest

from nilmat.errors import CapExceededError, IndexOutOfRangeError
from nilmat.matrices import is_in_D, is_in_dtilde, is_special
from nilmat.poly import Polynomial, X, a, count_monomials, parse_polynomial
from nilmat.quotient import (
    BasisLabel,
    IdealSpec,
    algebra_basis,
    algebra_dimension,
    dimension_formula,
    generic_matrix,
    ideals_equal,
    membership_oracle,
    normal_form,
    oracle_quotient_dimension,
    oracle_rank,
    oracle_reduce,
    oracle_total_dimension,
)


def P(text):
    return parse_polynomial(text)


def random_xpoly(rng, m, n, max_deg=3, terms=4, params=0):
    p = Polynomial()
    for _ in range(terms):
        mono = [X(rng.randint(1, m), rng.randint(1, n)) for _ in range(rng.randint(0, max_deg))]
        if params:
            mono += [a(rng.randint(1, params))] * rng.randint(0, 1)
        p = p + Polynomial.monomial(mono, rng.randint(-3, 3))
    return p


@pytest.mark.parametrize(
    "expr, grid, expected",
    [
        ("X12*X21", (2, 2), "-X11*X22"),
        ("X11*X12", (2, 2), "0"),
        ("X11*X22*X33", (3, 3), "X11*X22*X33"),
        ("X11^2", (2, 2), "0"),
        ("X13*X22*X31", (3, 3), "-X11*X22*X33"),
        ("X12*X23*X31", (3, 3), "X11*X22*X33"),
        ("a1*X12*X21 + 3", (2, 2), "3 - a1*X11*X22"),
    ],
)
def test_normal_form_examples(expr, grid, expected):
    assert str(normal_form(P(expr), *grid)) == expected


def test_normal_form_rejects_out_of_grid():
    with pytest.raises(IndexOutOfRangeError):
        normal_form(P("X31"), 2, 2)


def test_normal_form_terms_by_basis_label():
    nf = normal_form(P("a1*X12*X21 + 2*X12 + 1"), 2, 2)
    terms = nf.terms()
    assert terms[BasisLabel((1, 2), (1, 2))] == P("-a1")
    assert terms[BasisLabel((1,), (2,))] == P("2")
    assert terms[BasisLabel((), ())] == P("1")


@pytest.mark.parametrize("m,n,dim", [(2, 2, 6), (1, 4, 5), (2, 3, 10), (3, 3, 20), (3, 2, 10)])
def test_algebra_dimension_examples(m, n, dim):
    result = algebra_dimension(m, n)
    assert result.dimension == dim == dimension_formula(m, n)
    assert len(set(result.basis)) == dim


def test_basis_2x2_labels():
    assert [str(b) for b in algebra_basis(2, 2)] == ["1", "X11", "X12", "X21", "X22", "det{1,2|1,2}"]


def test_algebra_dimension_cap():
    with pytest.raises(CapExceededError):
        algebra_dimension(6, 2)
    assert algebra_dimension(5, 5).dimension == sum(comb(5, p) ** 2 for p in range(6))


def test_membership_examples():
    full, special = IdealSpec.full_dtilde(2, 2), IdealSpec.special_only(2)
    assert membership_oracle(P("X11*X22 + X12*X21"), full)
    assert not membership_oracle(P("X11*X12"), special)
    assert membership_oracle(P("X11^2"), full)
    assert not membership_oracle(P("X11^2"), special)
    assert oracle_rank(special, 2) == 1


def test_oracle_caps():
    with pytest.raises(CapExceededError):
        membership_oracle(P("X11^5"), IdealSpec.full_dtilde(2, 2))
    with pytest.raises(CapExceededError):
        oracle_quotient_dimension(IdealSpec.full_dtilde(5, 4), 2)


def test_generic_matrix_examples():
    assert is_in_dtilde(generic_matrix(2, 2))
    S = generic_matrix(2, 2, "special")
    assert is_special(S) and not is_in_dtilde(S)
    row = generic_matrix(1, 3)
    assert is_in_D(row) and is_in_dtilde(row)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_dimension_identity_against_oracle(m, n):
    ideal = IdealSpec.full_dtilde(m, n)
    per_degree = [count_monomials(m, n, d) - oracle_rank(ideal, d) for d in range(min(m, n) + 2)]
    assert per_degree[-1] == 0
    assert per_degree == [comb(m, d) * comb(n, d) for d in range(min(m, n) + 2)]
    assert oracle_total_dimension(ideal) == algebra_dimension(m, n).dimension


def test_special_quotient_pieces():
    ideal = IdealSpec.special_only(2)
    # 10 quadratic monomials, one relation
    assert oracle_quotient_dimension(ideal, 2) == 9


def test_normal_form_is_homomorphism():
    rng = random.Random(11)
    for _ in range(300):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        p, q = random_xpoly(rng, m, n, 2, params=2), random_xpoly(rng, m, n, 2, params=2)
        assert normal_form(p + q, m, n) == normal_form(p, m, n) + normal_form(q, m, n)
        assert normal_form(p * q, m, n) == normal_form(p, m, n) * normal_form(q, m, n)


@pytest.mark.parametrize("m,n", [(1, 3), (2, 2), (2, 3), (3, 3)])
def test_products_beyond_min_vanish(m, n):
    k = min(m, n) + 1
    cells = [X(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
    for mono in combinations_with_replacement(cells, k):
        assert normal_form(Polynomial.monomial(mono), m, n).is_zero()


def test_confluence_small_sample():
    rng = random.Random(5)
    for _ in range(500):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        p, q = random_xpoly(rng, m, n), random_xpoly(rng, m, n)
        same = normal_form(p, m, n) == normal_form(q, m, n)
        assert same == membership_oracle(p - q, IdealSpec.full_dtilde(m, n))


def test_oracle_reduce_agrees_with_rewriting_on_remainders():
    # both are canonical remainders, so each vanishes exactly on the ideal
    rng = random.Random(8)
    ideal = IdealSpec.full_dtilde(2, 2)
    for _ in range(200):
        p = random_xpoly(rng, 2, 2, params=2)
        r = oracle_reduce(p, ideal)
        assert normal_form(r, 2, 2) == normal_form(p, 2, 2)
        assert oracle_reduce(r, ideal) == r


def test_special_ideal_strictly_smaller():
    full, special = IdealSpec.full_dtilde(3, 3), IdealSpec.special_only(3)
    assert all(membership_oracle(g, full) for g in special.generators())
    assert not ideals_equal(full, special)


def test_generated_by_validation():
    IdealSpec.generated_by(2, 2, [P("X11^2")])
    with pytest.raises(ValueError):
        IdealSpec.generated_by(2, 2, [P("X11^2 + X12")])
    with pytest.raises(ValueError):
        IdealSpec.generated_by(2, 2, [P("a1*X11")])


def test_generated_by_rows_recovers_full_ideal():
    # rows in D(n) plus pairwise neighbours generate J
    E = [[Polynomial.var(X(i, j)) for j in (1, 2)] for i in (1, 2)]
    gens = [r[j] * r[k] for r in E for j in range(2) for k in range(2)]
    diff = [E[0][j] - E[1][j] for j in range(2)]
    gens += [diff[j] * diff[k] for j in range(2) for k in range(2)]
    assert ideals_equal(IdealSpec.generated_by(2, 2, gens), IdealSpec.full_dtilde(2, 2))


def test_three_by_three_sweep_is_fast():
    start = time.perf_counter()
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            oracle_total_dimension(IdealSpec.full_dtilde(m, n))
    assert time.perf_counter() - start < 10
