from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crnbal import linalg
from crnbal.model import build_matrices

from .conftest import triangle, deficient_cycle
from .oracles import integer_rank, laplace_det, leibniz_det


def test_determinant_identity():
    assert linalg.determinant(np.eye(3, dtype=int)) == 1


def test_determinant_dependent_rows():
    assert linalg.determinant([[2, -3], [-2, 3]]) == 0


def test_laplacian_is_singular(triangle_net):
    assert linalg.determinant(build_matrices(triangle_net).L) == 0


def test_determinant_needs_pivoting():
    M = [[0, 1, 2], [1, 0, 3], [4, -3, 8]]
    assert linalg.determinant(M) == laplace_det(M) == -2


def test_determinant_float_input():
    assert linalg.determinant([[2.0, 1.0], [1.0, 3.0]]) == pytest.approx(5.0)


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def square_matrices(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    return [[draw(small_fractions) for _ in range(n)] for _ in range(n)]


@settings(max_examples=200, deadline=None)
@given(square_matrices())
def test_determinant_matches_cofactor_expansion(M):
    assert linalg.determinant(M) == laplace_det(M)


@settings(max_examples=50, deadline=None)
@given(square_matrices(max_n=4))
def test_laplace_oracle_matches_leibniz(M):
    assert laplace_det(M) == leibniz_det(M)


int_matrices = st.integers(1, 5).flatmap(
    lambda rows: st.integers(1, 6).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(-3, 3), min_size=cols, max_size=cols), min_size=rows, max_size=rows
        )
    )
)


@settings(max_examples=200, deadline=None)
@given(int_matrices)
def test_rank_and_nullspace(M):
    r = linalg.rank(M)
    assert r == integer_rank(M)
    basis = linalg.nullspace_integer_basis(M)
    assert len(basis) == len(M[0]) - r
    A = np.array(M, dtype=object)
    for v in basis:
        assert all(x == 0 for x in A.dot(np.array(v, dtype=object)))
        assert np.gcd.reduce([abs(x) for x in v]) == 1
    if basis:
        assert integer_rank(basis) == len(basis)


def test_nullspace_of_deficient_cycle_stoichiometry():
    basis = linalg.nullspace_integer_basis([[-1, 2, -1], [0, 0, 0]])
    assert len(basis) == 2
    assert integer_rank([[-1, 2, -1], [0, 0, 0]]) == 1


def test_nullspace_of_identity_is_empty():
    assert linalg.nullspace_integer_basis(np.eye(4, dtype=int)) == []


def test_rank_of_triangle_incidence(triangle_net):
    D = build_matrices(triangle_net).D
    assert linalg.rank(D) == 2 == integer_rank(D.tolist())


def test_integer_normalize():
    assert linalg.integer_normalize([Fraction(1, 2), Fraction(-1, 3), 0]) == (3, -2, 0)
    assert linalg.integer_normalize([0, 0]) == (0, 0)
    assert linalg.integer_normalize([4, -6]) == (2, -3)


def test_membership_zero_vector():
    res = linalg.in_column_space([[1, 2], [3, 4], [5, 6]], [0, 0, 0])
    assert res.holds and res.coefficients == (0, 0)


def test_membership_first_column():
    M = [[1, 2], [3, 4], [5, 6]]
    res = linalg.in_column_space(M, [1, 3, 5])
    assert res.holds and res.coefficients == (1, 0)


def test_membership_rejection_witness():
    res = linalg.in_column_space([[1], [0]], [0, 1])
    assert not res.holds
    assert res.witness == (0, 1)


def test_membership_float_mode():
    res = linalg.in_column_space([[1.0], [0.0]], [2.0, 1e-12])
    assert res.holds and res.residual < 1e-9
    assert not linalg.in_column_space([[1.0], [0.0]], [0.0, 1.0]).holds


@settings(max_examples=200, deadline=None)
@given(int_matrices, st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_membership_certificates(M, v):
    v = v[: len(M)] + [0] * max(0, len(M) - len(v))
    res = linalg.in_column_space(M, v)
    A = np.array(M, dtype=object)
    if res.holds:
        assert list(A.dot(np.array(res.coefficients, dtype=object))) == v
    else:
        w = np.array(res.witness, dtype=object)
        assert all(x == 0 for x in w.dot(A))
        assert w.dot(np.array(v, dtype=object)) != 0


def test_intersection_deficient_cycle_has_dimension_one():
    mats = build_matrices(deficient_cycle((2, 4, 1)))
    basis = linalg.intersection_basis(mats.Z, mats.D)
    assert basis == [(-2, 1, 1)]
    assert 3 - 1 - integer_rank(mats.S.tolist()) == 1


def test_intersection_zero_deficiency_pair():
    D = [[-1, 1], [1, -1]]
    assert linalg.intersection_basis(np.eye(2, dtype=int), D) == []


def test_intersection_with_zero_matrix():
    B = [[1, 2, 3], [0, 1, 1], [1, 3, 4]]
    basis = linalg.intersection_basis(np.zeros((2, 3), dtype=int), B)
    assert len(basis) == integer_rank(B) == 2
    for v in basis:
        assert linalg.in_column_space(B, v).holds


@settings(max_examples=150, deadline=None)
@given(int_matrices, int_matrices)
def test_intersection_vectors_in_both(A, B):
    cols = len(A[0])
    B = [row[:3] + [0] * max(0, 3 - len(row)) for row in B]
    B = (B + [[0, 0, 0]] * cols)[:cols]
    basis = linalg.intersection_basis(A, B)
    Aa = np.array(A, dtype=object)
    for s in basis:
        assert all(x == 0 for x in Aa.dot(np.array(s, dtype=object)))
        assert linalg.in_column_space(B, s).holds
    if basis:
        assert integer_rank(basis) == len(basis)
    # dimension check: dim(ker A ∩ im B) = rank B - rank(A B)
    AB = Aa.dot(np.array(B, dtype=object)).tolist()
    assert len(basis) == integer_rank(B) - integer_rank(AB)


def test_column_space_basis_keeps_first_independent_columns():
    assert linalg.column_space_basis([[1, 2, 0], [1, 2, 1]]) == [(1, 1), (0, 1)]


def test_triangle_deficiency_identity_complexes(triangle_net):
    mats = build_matrices(triangle_net)
    assert linalg.intersection_basis(mats.Z, mats.D) == []
    assert linalg.rank(mats.S) == linalg.rank(mats.D) == 2


def test_nonsquare_determinant_rejected():
    with pytest.raises(ValueError):
        linalg.determinant([[1, 2, 3], [4, 5, 6]])


def test_float_in_exact_helper_rejected():
    with pytest.raises(TypeError):
        linalg.rational_matrix([[0.5]])


def test_triangle_random_rational_laplacians_singular(rng):
    for _ in range(20):
        kp = [Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(3)]
        km = [Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(3)]
        assert linalg.determinant(build_matrices(triangle(kp, km)).L) == 0
