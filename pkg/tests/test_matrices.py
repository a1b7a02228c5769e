import json
import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy

from nilmat.errors import CapExceededError, ShapeMismatchError
from nilmat.matrices import (
    Matrix,
    PolyMap,
    apply_polymap_columns,
    are_neighbors,
    beta,
    det,
    is_in_D,
    is_in_dtilde,
    is_infinitesimal_simplex,
    is_special,
    mat_mul,
    mult_trace,
)
from nilmat.poly import parse_polynomial
from nilmat.quotient import generic_matrix
from nilmat.rings import ring_make
from nilmat.sampling import CONCRETE_RINGS, corrupt, random_dn, random_dtilde, random_matrix, random_scalar

Q = ring_make("Q")
N1 = ring_make("nil:Q:1")
N2 = ring_make("nil:Q:2")


def qmat(rows):
    return Matrix(Q, [[Q(v) for v in r] for r in rows])


def vec(ring, values):
    return Matrix.row_vector(ring, [ring.parse(v) if isinstance(v, str) else ring(v) for v in values])


def test_is_in_D_examples():
    e1, e2 = N2.generators()
    assert is_in_D(Matrix.row_vector(N2, [e1, e2]))
    assert not is_in_D(Matrix.row_vector(N2, [e1, N2.one]))
    G = generic_matrix(2, 2)
    assert is_in_D(G.row(0))
    with pytest.raises(ShapeMismatchError):
        is_in_D(G)


def test_is_in_dtilde_examples():
    d = N1.generators()[0]
    for m in range(1, 4):
        for n in range(1, 4):
            assert is_in_dtilde(Matrix(N1, [[d] * n for _ in range(m)]))
    assert is_in_dtilde(generic_matrix(2, 2))
    assert not is_in_dtilde(qmat([[1, -1], [1, 1]]))


def test_is_special_examples():
    assert is_special(qmat([[1, -1], [1, 1]]))
    assert is_special(generic_matrix(2, 2))
    assert not is_special(qmat([[1, 0], [0, 1]]))
    with pytest.raises(ShapeMismatchError):
        is_special(vec(Q, [1, 2]))


def test_neighbors_examples():
    e1, e2 = N2.generators()
    v = [e1, e2]
    assert are_neighbors(v, v)
    assert are_neighbors([e1, N2.zero], [N2.zero, e2])
    assert not are_neighbors([Q.one, Q.zero], [Q.zero, Q.zero])
    with pytest.raises(ShapeMismatchError):
        are_neighbors([Q.one], [Q.one, Q.zero])


def test_simplex_examples():
    G = generic_matrix(3, 2)
    zero = [G.ring.zero] * 2
    assert is_infinitesimal_simplex(G.row_list() + [zero])
    assert is_infinitesimal_simplex([[Q.one, Q.zero]])
    assert not is_infinitesimal_simplex([[Q(0), Q(0)], [Q(1), Q(0)], [Q(0), Q(1)]])


def test_beta_examples():
    assert beta([Q(1), Q(0)], [Q(0), Q(1)]) == [Q(0), Q(1), Q(1), Q(0)]
    x = [Q(2), Q(3)]
    assert beta(x, x) == [Q(2) * x[j] * x[k] for j in range(2) for k in range(2)]
    r1, r2 = generic_matrix(2, 3).row_list()
    assert all(v.is_zero() for v in beta(r1, r2))


def test_beta_characterizes_dtilde():
    rng = random.Random(9)
    for _ in range(200):
        R = ring_make(rng.choice(CONCRETE_RINGS))
        X_ = random_dtilde(R, 3, 2, rng)
        if rng.random() < 0.5:
            X_ = corrupt(X_, rng) if rng.random() < 0.5 else random_matrix(R, 3, 2, rng)
        rows = X_.row_list()
        by_beta = all(all(v.is_zero() for v in beta(p, q)) for p in rows for q in rows)
        assert by_beta == is_in_dtilde(X_)


def test_mat_mul_examples():
    G = generic_matrix(2, 3, params=6)
    I2 = Matrix.identity(G.ring, 2)
    assert mat_mul(I2, G) == G
    P = Matrix(G.ring, [[G.ring.param(1), G.ring.param(2)], [G.ring.param(3), G.ring.param(4)],
                        [G.ring.param(5), G.ring.param(6)]])
    assert is_in_dtilde(mat_mul(P, G))
    Qm = Matrix(G.ring, [[G.ring.param(k)] for k in (1, 2, 3)])
    assert is_in_dtilde(mat_mul(G, Qm))
    with pytest.raises(ShapeMismatchError):
        mat_mul(G, G)


def test_det_examples():
    G = generic_matrix(2, 2)
    assert str(det(G)) == "2*X11*X22"
    d = N1.generators()[0]
    for n in (2, 3, 4):
        assert det(Matrix(N1, [[d] * n for _ in range(n)])).is_zero()
    assert det(qmat([[1, -1], [1, 1]])) == Q(2)


def test_det_matches_sympy():
    rng = random.Random(6)
    for _ in range(60):
        n = rng.randint(1, 5)
        rows = [[Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3))) for _ in range(n)] for _ in range(n)]
        expected = sympy.Matrix(rows).det()
        assert det(qmat(rows)) == Q(Fraction(int(sympy.numer(expected)), int(sympy.denom(expected))))


def test_det_cap_and_shape():
    with pytest.raises(CapExceededError):
        det(Matrix.identity(Q, 7))
    with pytest.raises(ShapeMismatchError):
        det(qmat([[1, 2]]))


def test_mult_trace_examples():
    assert mult_trace(Matrix.identity(Q, 4)) == Q.one
    assert mult_trace(qmat([[1, -1], [1, 1]])) == Q.one
    assert str(mult_trace(generic_matrix(2, 2))) == "X11*X22"


def test_polymap_linear_equals_product():
    G = generic_matrix(2, 3)
    g = PolyMap(2, ["2*u1 - u2", "u2", "3*u1"])
    Gmat = Matrix(G.ring, [[G.ring(2), G.ring(-1)], [G.ring(0), G.ring(1)], [G.ring(3), G.ring(0)]])
    assert apply_polymap_columns(g, G) == mat_mul(Gmat, G)


def test_polymap_quadratic_rows_vanish_on_dtilde():
    G = generic_matrix(2, 3)
    g = PolyMap(2, ["u1^2", "u1*u2", "u2^2"])
    assert all(x.is_zero() for r in apply_polymap_columns(g, G).row_list() for x in r)


def test_polymap_identity():
    G = generic_matrix(3, 2)
    assert apply_polymap_columns(PolyMap(3, ["u1", "u2", "u3"]), G) == G


def test_polymap_validation():
    with pytest.raises(ValueError):
        PolyMap(2, ["u1 + 1"])
    with pytest.raises(ShapeMismatchError):
        PolyMap(2, ["u3"])
    with pytest.raises(ValueError):
        PolyMap(2, ["X11*u1"])
    with pytest.raises(ShapeMismatchError):
        apply_polymap_columns(PolyMap(3, ["u1"]), generic_matrix(2, 2))


def test_polymap_homogeneous_parts():
    g = PolyMap(2, ["u1 + u1*u2 - u2^3", "u2^2"])
    assert [str(c) for c in g.homogeneous_part(2).components] == ["u1*u2", "u2^2"]
    total = [sum((g.homogeneous_part(d).components[k] for d in (1, 2, 3)), parse_polynomial("0")) for k in (0, 1)]
    assert total == list(g.components)


def test_json_round_trips():
    for spec in ("Q", "Zmod:9", "nil:Q:2", "gdt:2:2", "params:1:gdt:2:2"):
        R = ring_make(spec)
        M = random_matrix(R, 2, 3, random.Random(1)) if spec != "params:1:gdt:2:2" else Matrix(
            R, [[R.param(1) * R.x(1, 1), R(3)], [R.x(2, 2), R.one]])
        text = json.dumps(M.to_json())
        assert Matrix.from_json(text) == M
    g = PolyMap(2, ["1/2*u1^2 + a1*u2", "u1"])
    assert PolyMap.from_json(json.dumps(g.to_json())).components == g.components
    with pytest.raises(ShapeMismatchError):
        Matrix.from_json({"ring": "Q", "rows": 3, "cols": 1, "entries": [["1"]]})


def test_mixed_ring_matrix_rejected():
    with pytest.raises(Exception):
        Matrix(Q, [[Q.one, N1.one]])


def _dtilde_samples(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        R = ring_make(rng.choice(CONCRETE_RINGS)) if rng.random() < 0.8 else None
        yield random_dtilde(R, rng.randint(1, 4), rng.randint(1, 4), rng), rng


def test_transpose_symmetry():
    for X_, rng in _dtilde_samples(200, 1):
        for M in (X_, corrupt(X_, rng)):
            assert is_in_dtilde(M) == is_in_dtilde(M.T)
            if M.rows >= 2 and M.cols >= 2:
                assert is_special(M) == is_special(M.T)


def test_submatrix_closure():
    for X_, rng in _dtilde_samples(150, 2):
        for p in range(1, X_.rows + 1):
            for q in range(1, X_.cols + 1):
                rows = rng.sample(range(X_.rows), p)
                cols = rng.sample(range(X_.cols), q)
                assert is_in_dtilde(X_.submatrix(sorted(rows), sorted(cols)))


def test_two_by_two_minors_suffice():
    rng = random.Random(3)
    for _ in range(200):
        R = ring_make(rng.choice(CONCRETE_RINGS))
        M = random_dtilde(R, 3, 3, rng)
        if rng.random() < 0.5:
            M = corrupt(M, rng)
        minors = all(
            is_in_dtilde(M.submatrix(list(r), list(c)))
            for r in combinations(range(3), 2)
            for c in combinations(range(3), 2)
        )
        assert minors == is_in_dtilde(M)


def test_scaling_preserves_D():
    rng = random.Random(4)
    for _ in range(300):
        R = ring_make(rng.choice(CONCRETE_RINGS))
        x = random_dn(R, rng.randint(1, 4), rng)
        lam = random_scalar(R, rng)
        assert is_in_D([lam * v for v in x])


def test_dtilde_not_closed_under_addition():
    G = generic_matrix(2, 2)
    assert is_in_dtilde(G) and is_in_dtilde(G.T)
    assert not is_in_dtilde(G + G.T)
