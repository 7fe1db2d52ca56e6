import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conegaps.lattice import (
    Cone,
    Lattice,
    NotPositiveError,
    PositiveBasis,
    generate_positive_basis,
    is_primitive,
    member,
    positive_bases,
    random_lattice,
    transport,
)
from conegaps.linalg import RationalMatrix, det


def test_singular_lattice_rejected():
    with pytest.raises(ValueError):
        Lattice(RationalMatrix([[1, 2], [2, 4]]))


def test_member_and_primitive():
    L = Lattice.from_columns([(2, 0), (1, 3)])
    assert member(L, (3, 3)) == (1, 1)
    assert member(L, (1, 0)) is None
    assert is_primitive(L, (3, 3))
    assert not is_primitive(L, (6, 6))


def test_lattice_equality_uses_hnf():
    A = Lattice.from_columns([(1, 0), (0, 1)])
    B = Lattice.from_columns([(1, 1), (1, 2)])
    assert A == B
    assert A != Lattice.from_columns([(2, 0), (0, 1)])


@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_generated_basis_is_strictly_positive_and_unimodular(seed, d):
    L = random_lattice(d, random.Random(seed))
    X = generate_positive_basis(L, seed)
    assert X.is_strictly_positive()
    assert abs(det(X.change)) == 1
    assert X.lattice == Lattice(X.matrix)


def test_generation_is_deterministic():
    L = random_lattice(3, random.Random(5))
    assert generate_positive_basis(L, 9).matrix == generate_positive_basis(L, 9).matrix


def test_distinct_bases():
    L = Lattice.integer_lattice(2)
    bases = positive_bases(L, 3, seed=0)
    mats = {tuple(map(tuple, b.change.tolist())) for b in bases}
    assert len(mats) == 3
    for b in bases:
        assert b.is_strictly_positive()


def test_forced_first_vector():
    L = Lattice.integer_lattice(2)
    X = generate_positive_basis(L, first=(2, 3))
    assert X.vectors[0] == (2, 3)


def test_positive_basis_validation():
    L = Lattice.integer_lattice(2)
    with pytest.raises(NotPositiveError):
        PositiveBasis.from_columns(L, [(1, -1), (1, 2)])
    with pytest.raises(ValueError):
        PositiveBasis.from_columns(L, [(1, 1), (1, 3)])  # index 2


@given(st.integers(0, 10 ** 6))
def test_transport_round_trip(seed):
    rng = random.Random(seed)
    L = random_lattice(2, rng)
    Y = Cone.from_columns([(1, 0), (rng.randint(0, 3), rng.randint(1, 3))])
    M = transport(L, Y)
    back = Lattice(Y.generators @ M.basis)
    assert back.hnf() == L.hnf()
    # oracle: sympy's HNF of the original basis agrees up to the column convention
    H = sympy.Matrix(L.basis.tolist())
    assert abs(H.det()) == L.det_abs


def test_cone_contains():
    Y = Cone.from_columns([(1, 0), (1, 1)])
    assert Y.contains((2, 1))
    assert Y.contains((1, 1))
    assert not Y.contains((0, 1))
