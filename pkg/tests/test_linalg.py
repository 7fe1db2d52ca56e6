from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from conegaps.linalg import (
    IndependenceTracker,
    RationalMatrix,
    RationalVector,
    det,
    extend_primitive,
    gcd_vector,
    hnf,
    invert,
    is_unimodular,
    rank,
    solve,
    xgcd,
)

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@given(square(3))
def test_det_matches_sympy(rows):
    assert det(RationalMatrix(rows)) == sympy.Matrix(rows).det()


@given(square(3))
def test_invert_and_solve(rows):
    M = RationalMatrix(rows)
    assume(det(M) != 0)
    assert M @ invert(M) == RationalMatrix.identity(3)
    v = RationalVector([1, Fraction(1, 2), -3])
    assert M @ solve(M, v) == v


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        invert(RationalMatrix([[1, 2], [2, 4]]))


@given(square(3))
def test_hnf_is_lower_triangular_and_unimodular(rows):
    M = RationalMatrix(rows)
    assume(det(M) != 0)
    H, U = hnf(M)
    assert M @ U == H
    assert is_unimodular(U)
    for i in range(3):
        assert H[i, i] > 0
        for j in range(i + 1, 3):
            assert H[i, j] == 0
        for j in range(i):
            assert 0 <= H[i, j] < H[i, i]


def test_hnf_is_a_lattice_invariant():
    M = RationalMatrix([[2, 1], [0, 3]])
    U = RationalMatrix([[1, 4], [1, 5]])
    assert hnf(M)[0] == hnf(M @ U)[0]


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_xgcd(a, b):
    g, x, y = xgcd(a, b)
    assert a * x + b * y == g
    assert g == sympy.gcd(a, b)


@given(st.lists(small, min_size=2, max_size=4))
def test_extend_primitive(a):
    g = gcd_vector(a) if any(a) else 0
    assume(g != 0)
    a = [x // g for x in a]
    A = extend_primitive(a)
    assert is_unimodular(A)
    assert A.col(0) == RationalVector(a)


def test_rank_and_tracker():
    assert rank([[1, 2, 3], [2, 4, 6], [0, 1, 0]]) == 2
    t = IndependenceTracker(3)
    assert t.add([1, 0, 0])
    assert not t.is_independent([2, 0, 0])
    assert t.add([1, 1, 0])
    assert t.is_independent([0, 0, 1])


def test_matrix_json_round_trip():
    M = RationalMatrix([[1, Fraction(-2, 3)], [0, 5]])
    assert RationalMatrix.from_json(M.to_json()) == M
    with pytest.raises(ValueError):
        RationalMatrix.from_json({"rows": 3, "cols": 2, "entries": [[1, 2], [3, 4]]})
