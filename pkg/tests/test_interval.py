import math
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from conegaps.interval import Interval, iroot, rational_leq_sqrt, sqrt_bounds

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=50)


@given(st.integers(0, 10 ** 30), st.integers(2, 5))
def test_iroot(n, k):
    r = iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


@given(st.fractions(min_value=0, max_value=1000, max_denominator=1000))
def test_sqrt_bounds_enclose(q):
    lo, hi = sqrt_bounds(q, 40)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= Fraction(1, 2 ** 39)


@given(fracs, st.fractions(min_value=0, max_value=50, max_denominator=50))
def test_rational_leq_sqrt_is_exact(r, q):
    expected = r < 0 or r * r <= q
    assert rational_leq_sqrt(r, q) == expected


@given(fracs, fracs, fracs, fracs)
def test_interval_arithmetic_contains_point_results(a, b, c, d):
    X = Interval(min(a, b), max(a, b))
    Y = Interval(min(c, d), max(c, d))
    for x in (X.lo, X.hi, X.mid):
        for y in (Y.lo, Y.hi):
            assert (X + Y).contains(x + y)
            assert (X - Y).contains(x - y)
            assert (X * Y).contains(x * y)


def test_sign_floor_ceil():
    assert Interval(Fraction(1, 3), Fraction(1, 2)).sign() == 1
    assert Interval(-1, 1).sign() is None
    assert Interval(Fraction(5, 4), Fraction(7, 4)).floor() == 1
    assert Interval(Fraction(1, 2), Fraction(3, 2)).floor() is None
    assert Interval(Fraction(5, 4), Fraction(7, 4)).ceil() == 2
    assert math.isclose(Interval.point(2).root(2, 60).to_floats()[0], math.sqrt(2))
