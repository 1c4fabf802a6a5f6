from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nbjohnson.exact import (BinaryMatrix, DimensionError, ExactMatrix, anticommutator, commutator,
                             hadamard, int_matmul, inverse, mat_mul, solve)

@st.composite
def matrices(draw, dim=None):
    d = dim if dim is not None else draw(st.integers(1, 8))
    nums = draw(st.lists(st.integers(-50, 50), min_size=d * d, max_size=d * d))
    dens = draw(st.lists(st.integers(1, 12), min_size=d * d, max_size=d * d))
    vals = [Fraction(a, b) for a, b in zip(nums, dens)]
    return ExactMatrix.from_rows([vals[t * d:(t + 1) * d] for t in range(d)])


@st.composite
def matrix_triples(draw):
    d = draw(st.integers(1, 8))
    return draw(matrices(d)), draw(matrices(d)), draw(matrices(d))


def reference_product(a: ExactMatrix, b: ExactMatrix):
    n = a.dim
    return [[sum((a[i, t] * b[t, j] for t in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)]


@given(matrices())
def test_rows_round_trip(m):
    assert ExactMatrix.from_rows(m.rows()) == m
    assert all(isinstance(v, Fraction) for row in m.rows() for v in row)


@given(matrices())
def test_canonical_form_is_reduced(m):
    g = np.gcd.reduce(np.append(m.numerators.ravel().astype(object), m.denominator))
    assert m.denominator > 0 and (g == 1 or m.is_zero())


@given(matrix_triples())
def test_product_associative(abc):
    a, b, c = abc
    assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))


@given(matrix_triples())
def test_product_matches_fraction_reference(abc):
    a, b, _ = abc
    assert (a @ b).rows() == reference_product(a, b)


@given(matrix_triples())
def test_hadamard_commutative_and_distributive(abc):
    a, b, c = abc
    assert hadamard(a, b) == hadamard(b, a)
    assert hadamard(a, b + c) == hadamard(a, b) + hadamard(a, c)
    assert hadamard(a, ExactMatrix.ones(a.dim)) == a


@given(matrices())
def test_commutator_with_itself_vanishes(m):
    assert commutator(m, m).is_zero()
    assert anticommutator(m, m) == (m @ m).scale(2)


def test_identity_and_ones():
    m = ExactMatrix.from_rows([[1, Fraction(1, 2)], [3, -4]])
    assert ExactMatrix.identity(2) @ m == m
    J = ExactMatrix.ones(5)
    assert J @ J == J.scale(5)


def test_integer_kernel_tiers_agree():
    rng = np.random.default_rng(7)
    small = rng.integers(-9, 10, size=(6, 6))
    ref = small.astype(object) @ small.astype(object)
    assert (int_matmul(small, small) == ref).all()
    mid = small * 10**7  # beyond the float64 bound, inside int64
    assert (int_matmul(mid, mid) == mid.astype(object) @ mid.astype(object)).all()
    big = small.astype(object) * 10**12  # needs Python integers
    assert (int_matmul(big, big) == big @ big).all()


def test_large_entries_stay_exact():
    big = ExactMatrix([[2**70, 1], [0, 1]])
    sq = big @ big
    assert sq[0, 0] == 2**140 and sq[0, 1] == 2**70 + 1


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        ExactMatrix.identity(2) @ ExactMatrix.identity(3)
    with pytest.raises(DimensionError):
        ExactMatrix([[1, 2, 3]])


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        ExactMatrix([[1]], 0)


def test_first_difference_reports_entry():
    a = ExactMatrix.identity(3)
    b = ExactMatrix.from_rows([[1, 0, 0], [0, 1, Fraction(1, 3)], [0, 0, 1]])
    assert a.first_difference(b) == (1, 2, 0, Fraction(1, 3))
    assert a.first_difference(a) is None


def test_diagonal_helpers():
    d = ExactMatrix.diagonal([Fraction(1, 2), 3, 0])
    assert d.is_diagonal() and d.trace() == Fraction(7, 2)
    assert d.diag() == [Fraction(1, 2), 3, 0]
    assert commutator(d, ExactMatrix.diagonal([5, 6, 7])).is_zero()


def test_inverse_and_solve():
    rows = [[2, 1], [1, 1]]
    assert inverse(rows) == [[1, -1], [-1, 2]]
    assert solve(rows, [3, 2]) == [1, 1]
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])


def test_binary_matrix_packing():
    bits = np.array([[1, 0, 1], [0, 0, 0], [1, 1, 1]], dtype=bool)
    b = BinaryMatrix(bits)
    assert b.dim == 3
    assert (b.to_bool() == bits).all()
    assert list(b.row_sums()) == [2, 0, 3]
    assert b.to_exact() == ExactMatrix(bits.astype(np.int64))
    assert BinaryMatrix(np.zeros((4, 4), dtype=bool)).is_zero()
