import math
import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from conegaps.numberfield.field import init_field
from conegaps.numberfield.heights import (
    Verdict,
    check_height_inequalities,
    modulus_classes,
    random_integers,
    sup_norm,
    verify_height_inequalities,
    weil_height,
)

X = sympy.Symbol("x")


def _height_oracle(K, alpha):
    # sympy minimal polynomial of the element, then the Mahler measure from mpmath roots
    theta = sympy.CRootOf(sum(int(c) * X ** i for i, c in enumerate(K.poly)), 0)
    expr = sum(sympy.Rational(c.numerator, c.denominator) * theta ** i for i, c in enumerate(alpha.power))
    m = sympy.Poly(sympy.minimal_polynomial(expr, X), X)
    coeffs = [int(c) for c in m.all_coeffs()]
    mpmath.mp.dps = 40
    roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
    measure = abs(coeffs[0]) * mpmath.fprod(max(1, abs(r)) for r in roots)
    return float(measure ** (mpmath.mpf(1) / m.degree()))


def test_known_heights():
    K = init_field("x^2-2")
    assert weil_height(K, K.one).interval.contains(1)
    h = weil_height(K, K.from_power([2, 1])).interval.to_floats()
    assert h[0] <= math.sqrt(2 + math.sqrt(2)) + 1e-15 and math.sqrt(2 + math.sqrt(2)) - 1e-15 <= h[1]
    assert weil_height(K, K.theta).interval.to_floats()[0] == pytest.approx(math.sqrt(2))
    with pytest.raises(ValueError):
        weil_height(K, K.zero)


@pytest.mark.parametrize("text", ["x^2-2", "x^2-x-1", "x^3-3x-1"])
def test_heights_match_minimal_polynomial(text):
    K = init_field(text)
    rng = random.Random(4)
    for _ in range(6):
        a = K.element([rng.randint(-3, 3) for _ in range(K.d)])
        b = K.element([rng.randint(1, 3)] + [rng.randint(-2, 2) for _ in range(K.d - 1)])
        if a.is_zero() or b.is_zero():
            continue
        lo, hi = weil_height(K, a, 64, den=b).interval.to_floats()
        assert _height_oracle(K, a / b) == pytest.approx((lo + hi) / 2, rel=1e-12)


def test_rational_height():
    K = init_field("x^2-2")
    lo, hi = weil_height(K, K.from_power([Fraction(3, 2)])).interval.to_floats()
    assert lo <= 3 <= hi  # h(3/2) = max(|3|, |2|)


def test_sup_norm():
    K = init_field("x^2-2")
    lo, hi = sup_norm(K.from_power([1, 1])).to_floats()
    assert lo <= 1 + math.sqrt(2) + 1e-15 and 1 + math.sqrt(2) - 1e-15 <= hi


def test_equalities_are_exact():
    K = init_field("x^2-2")
    for a in (K.one, K.from_int(3), K.theta, K.from_power([1, 1])):
        chk = check_height_inequalities(K, a)
        assert chk.holds
    # units with one conjugate inside the unit circle: |Sigma| = h^d exactly
    chk = check_height_inequalities(K, K.from_power([1, 1]))
    assert any("exact" in how for _, _, how in chk.verdicts)


def test_modulus_classes():
    K = init_field("x^2-2")
    clusters, _ = modulus_classes(K.theta)
    assert len(clusters) == 1 and sorted(clusters[0][0]) == [0, 1]
    clusters, _ = modulus_classes(K.from_power([1, 1]))
    assert len(clusters) == 2


@pytest.mark.parametrize("text", ["x^2-2", "x^2-x-1", "x^3-3x-1"])
def test_random_integers_all_decided(text):
    K = init_field(text)
    rec = verify_height_inequalities(K, random_integers(K, 30, seed=11))
    assert rec.holds and rec.undecided == 0 and rec.failed == 0


def test_non_integral_rejected():
    K = init_field("x^2-2")
    with pytest.raises(ValueError):
        verify_height_inequalities(K, [K.from_power([Fraction(1, 2)])])


def test_verdict_values():
    assert {v.value for v in Verdict} == {"HOLDS", "FAILS", "UNDECIDED"}
