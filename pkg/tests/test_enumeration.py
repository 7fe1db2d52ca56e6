import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conegaps.enumeration import (
    CountQuery,
    EnumerationLimitError,
    PointSet,
    Region,
    count,
    count_ball,
    count_in_cone,
    count_positive,
    count_semigroup,
    count_semigroup_by_points,
    enumerate_region,
    semigroup_coefficients,
)
from conegaps.lattice import Cone, Lattice, PositiveBasis, generate_positive_basis, random_lattice


def _brute(L, t, pred, R=40):
    # oracle: coefficient box large enough for these small lattices
    n = 0
    for a in itertools.product(range(-R, R + 1), repeat=L.dim):
        v = L.point(a)
        if sum(x * x for x in v) <= t * t and pred(v):
            n += 1
    return n


def test_integer_lattice_counts(z2):
    assert count_ball(z2, 1) == 5
    assert count_ball(z2, 2) == 13
    assert count_positive(z2, 2) == 6
    X = PositiveBasis.from_columns(z2, [(1, 1), (1, 2)])
    assert count_semigroup(X, 3) == 4  # 0, (1,1), (1,2), (2,2)
    # recount with the oracle predicate
    assert count_semigroup(X, 3) == _brute(z2, 3, lambda v: all(c >= 0 for c in X.coefficients(v)), R=5)


@given(st.integers(0, 10 ** 6), st.integers(1, 9))
def test_counts_match_brute_force(seed, t):
    L = random_lattice(2, random.Random(seed), entry_bound=2)
    X = generate_positive_basis(L, seed)
    # |a|_inf <= d |L^-1|_inf |v|_2
    R = math.ceil(2 * t * max(abs(x) for row in L.inverse.tolist() for x in row)) + 1
    assert count_ball(L, t) == _brute(L, t, lambda v: True, R)
    assert count_positive(L, t) == _brute(L, t, lambda v: all(x >= 0 for x in v), R)
    assert count_semigroup(X, t) == count_semigroup_by_points(L, X, t)


def test_semigroup_coefficients(z2):
    X = PositiveBasis.from_columns(z2, [(1, 1), (1, 2)])
    assert sorted(semigroup_coefficients(X, 3)) == [(0, 0), (0, 1), (1, 0), (2, 0)]


def test_cone_count_and_queries(z2):
    Y = Cone.from_columns([(1, 0), (1, 1)])
    n = count_in_cone(z2, Y, 5)
    assert n == _brute(z2, 5, Y.contains, 6)
    assert count(z2, CountQuery(Region.BALL, PointSet.L_OF_Y, 5), Y=Y) == n
    q = CountQuery(Region.CUBE, PointSet.L_PLUS, 2)
    assert count(z2, q) == 9
    pts = enumerate_region(z2, Region.CONE_BALL, 2, cone=Y)
    assert all(Y.contains(p) for p in pts) and len(pts) == count_in_cone(z2, Y, 2)


def test_gap_query_needs_basis(z2):
    with pytest.raises(ValueError):
        count(z2, CountQuery(Region.BALL, PointSet.GAPS, 3))
    with pytest.raises(ValueError):
        CountQuery(Region.BALL, PointSet.LATTICE, 0)


def test_rational_radius(z2):
    assert count_ball(z2, Fraction(3, 2)) == 9


def test_point_cap(monkeypatch, z2):
    monkeypatch.setenv("CONEGAPS_MAX_POINTS", "100")
    with pytest.raises(EnumerationLimitError):
        enumerate_region(z2, Region.BALL, 50)
