"""Totally real number fields, their elements, and ideals of the chosen order."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..interval import Interval
from ..linalg import RationalMatrix, RationalVector, det, hnf, invert, to_fraction
from . import poly as P


class NotTotallyRealError(ValueError):
    pass


class NumberField:
    """Q(theta) for a monic irreducible integer polynomial with only real roots.

    ``integral_basis`` holds power-basis coordinate vectors (as columns of a
    matrix) of the Z-basis of the order used for coordinates; the default is
    the power basis 1, theta, ..., theta^(d-1).
    """

    def __init__(self, f, integral_basis: Optional[RationalMatrix] = None):
        f = P.normalize(f)
        if len(f) < 3:
            raise ValueError("defining polynomial must have degree at least 2")
        if f[-1] != 1 or any(c.denominator != 1 for c in f):
            raise ValueError("defining polynomial must be monic with integer coefficients")
        if not P.is_irreducible(f):
            raise ValueError(f"{P.format_poly(f)} is reducible over Q")
        d = P.degree(f)
        if P.count_real_roots(f) != d:
            raise NotTotallyRealError(f"{P.format_poly(f)} has non-real roots")
        self.poly = f
        self.d = d
        W = integral_basis if integral_basis is not None else RationalMatrix.identity(d)
        if W.shape != (d, d) or det(W) == 0:
            raise ValueError("integral basis must be d independent power-basis vectors")
        self.basis_matrix = W
        self._W_inv = invert(W)
        self._isolating = P.isolate_real_roots(f)
        self._roots: dict = {}
        self.power_sums = P.power_sums(f, 2 * d - 1)
        omegas = [self._reduce(tuple(W.col(j))) for j in range(d)]
        self.trace_gram = RationalMatrix(
            [[self._trace_poly(P.mul(omegas[i], omegas[j])) for j in range(d)] for i in range(d)]
        )
        self.discriminant = det(self.trace_gram)
        self._check_order(omegas)

    def _check_order(self, omegas) -> None:
        one = self._W_inv @ RationalVector([1] + [0] * (self.d - 1))
        if not one.is_integral():
            raise ValueError("integral basis does not contain 1 in its Z-span")
        for a, b in itertools.combinations_with_replacement(omegas, 2):
            c = self._W_inv @ RationalVector(self._pad(P.rem(P.mul(a, b), self.poly)))
            if not c.is_integral():
                raise ValueError("integral basis is not closed under multiplication")

    def _pad(self, p) -> list:
        return list(p) + [Fraction(0)] * (self.d - len(p))

    def _reduce(self, p) -> tuple:
        return P.rem(P.normalize(p), self.poly)

    def _trace_poly(self, p) -> Fraction:
        p = self._reduce(p)
        return sum((c * self.power_sums[k] for k, c in enumerate(p)), Fraction(0))

    # elements -------------------------------------------------------------

    def element(self, coords) -> "FieldElement":
        return FieldElement(self, tuple(to_fraction(c) for c in coords))

    def from_power(self, p) -> "FieldElement":
        p = self._reduce(p)
        return self.element(self._W_inv @ RationalVector(self._pad(p)))

    def from_int(self, n) -> "FieldElement":
        return self.from_power([n])

    @property
    def one(self) -> "FieldElement":
        return self.from_int(1)

    @property
    def zero(self) -> "FieldElement":
        return self.element([0] * self.d)

    @property
    def theta(self) -> "FieldElement":
        return self.from_power([0, 1])

    def basis_elements(self) -> list:
        return [self.element([int(i == j) for i in range(self.d)]) for j in range(self.d)]

    # embeddings ---------------------------------------------------------------

    def root_interval(self, i: int, k: int) -> Interval:
        """The i-th real root of f inside a dyadic-refined interval of width <= 2^-k.

        Refinement always bisects from the same isolating interval, so the
        result depends only on (i, k).
        """
        key = (i, k)
        if key not in self._roots:
            best = max((kk for (ii, kk) in self._roots if ii == i and kk < k), default=None)
            a, b = self._roots[(i, best)] if best is not None else self._isolating[i]
            self._roots[key] = P.refine_root(self.poly, a, b, Fraction(1, 2 ** k))
        a, b = self._roots[key]
        return Interval(a, b)

    def to_json(self) -> dict:
        return {
            "poly": [int(c) for c in self.poly],
            "integral_basis": self.basis_matrix.to_json(),
            "degree": self.d,
            "discriminant": int(self.discriminant),
            "trace_gram": self.trace_gram.to_json(),
            "roots": [[float(a), float(b)] for a, b in (self.root_interval(i, 40).to_floats() for i in range(self.d))],
        }


def init_field(f, integral_basis=None) -> NumberField:
    """Build a field from a polynomial (string, or coefficient list lowest degree first)."""
    if isinstance(f, str):
        f = P.parse_poly(f)
    if integral_basis is not None and not isinstance(integral_basis, RationalMatrix):
        integral_basis = RationalMatrix.from_columns([RationalVector(c) for c in integral_basis])
    return NumberField(f, integral_basis)


def field_from_json(obj) -> NumberField:
    if "poly" not in obj:
        raise ValueError("field JSON needs 'poly'")
    ib = obj.get("integral_basis")
    if ib is not None:
        ib = RationalMatrix.from_json(ib) if isinstance(ib, dict) else RationalMatrix(ib)
    return NumberField(P.normalize(obj["poly"]), ib)


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: NumberField
    coords: tuple

    def _same(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.from_int(other)

    @property
    def power(self) -> tuple:
        """Coordinates in the power basis, as a polynomial in theta."""
        return P.normalize(self.field.basis_matrix @ RationalVector(self.coords))

    def __add__(self, other) -> "FieldElement":
        o = self._same(other)
        return self.field.element(a + b for a, b in zip(self.coords, o.coords))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return self.field.element(-a for a in self.coords)

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._same(other))

    def __rsub__(self, other) -> "FieldElement":
        return self._same(other) - self

    def __mul__(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            c = to_fraction(other)
            return self.field.element(c * a for a in self.coords)
        o = self._same(other)
        return self.field.from_power(P.mul(self.power, o.power))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        M = self.mult_matrix()
        return self.field.element(invert(M) @ RationalVector(self.field.one.coords))

    def __truediv__(self, other) -> "FieldElement":
        return self * self._same(other).inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_int(other)
        return isinstance(other, FieldElement) and other.field is self.field and other.coords == self.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"FieldElement({P.format_poly(self.power).replace('x', 't')})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return len(self.power) <= 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def mult_matrix(self) -> RationalMatrix:
        """Matrix of multiplication by self in the integral-basis coordinates."""
        cols = [(self * w).coords for w in self.field.basis_elements()]
        return RationalMatrix.from_columns(cols)

    def charpoly(self) -> tuple:
        return P.charpoly(self.mult_matrix())

    def trace(self) -> Fraction:
        return self.field._trace_poly(self.power)

    def norm(self) -> Fraction:
        return det(self.mult_matrix())

    def conjugate(self, i: int, bits: int = 64) -> Interval:
        """sigma_i(self) enclosed in an interval of width <= 2^-bits."""
        g = self.power
        if len(g) <= 1:
            return Interval.point(g[0] if g else 0)
        k = bits + 4
        while True:
            v = P.evaluate_interval(g, self.field.root_interval(i, k))
            if v.width <= Fraction(1, 2 ** bits):
                return v
            k += max(8, k // 2)

    def conjugates(self, bits: int = 64) -> list:
        return [self.conjugate(i, bits) for i in range(self.field.d)]

    def signs(self) -> list:
        """Exact signs of all conjugates (refined until each excludes 0)."""
        if self.is_zero():
            return [0] * self.field.d
        out = []
        for i in range(self.field.d):
            bits = 16
            while (s := self.conjugate(i, bits).sign()) is None:
                bits *= 2
            out.append(s)
        return out

    def to_json(self) -> dict:
        return {"coords": [str(c) for c in self.coords], "power": P.format_poly(self.power)}


def totally_positive(K: NumberField, alpha: FieldElement) -> bool:
    """sigma_i(alpha) >= 0 for every embedding (0 counts as totally positive)."""
    if alpha.field is not K:
        raise ValueError("element of another field")
    return all(s >= 0 for s in alpha.signs())


@dataclass(frozen=True, eq=False)
class IdealLattice:
    """An ideal of the order, as the Z-span of the columns of ``basis``."""

    field: NumberField
    basis: RationalMatrix
    norm: int = field(init=False)
    gram: RationalMatrix = field(init=False, repr=False)

    def __post_init__(self):
        K = self.field
        B = self.basis
        if B.shape != (K.d, K.d) or not B.is_integral() or det(B) == 0:
            raise ValueError("ideal basis must be a nonsingular integer d x d matrix")
        Binv = invert(B)
        for b in self.elements():
            for w in K.basis_elements():
                if not (Binv @ RationalVector((b * w).coords)).is_integral():
                    raise ValueError("basis does not span an ideal (not closed under multiplication)")
        object.__setattr__(self, "norm", int(abs(det(B))))
        object.__setattr__(self, "gram", B.T @ K.trace_gram @ B)

    def elements(self) -> list:
        return [self.field.element(self.basis.col(j)) for j in range(self.field.d)]

    def element(self, coeffs) -> FieldElement:
        """The ideal element with the given coefficients in the ideal basis."""
        return self.field.element(self.basis @ RationalVector(coeffs))

    def coefficients(self, alpha: FieldElement) -> Optional[tuple]:
        c = invert(self.basis) @ RationalVector(alpha.coords)
        return c.as_ints() if c.is_integral() else None

    def contains(self, alpha: FieldElement) -> bool:
        return self.coefficients(alpha) is not None

    def det_identity_holds(self) -> bool:
        """det(gram) == N(I)^2 * |disc| as an exact integer identity."""
        return det(self.gram) == self.norm ** 2 * abs(self.field.discriminant)

    def to_json(self) -> dict:
        return {"basis": self.basis.to_json(), "norm": self.norm, "gram": self.gram.to_json()}


def unit_ideal(K: NumberField) -> IdealLattice:
    return IdealLattice(K, RationalMatrix.identity(K.d))


def ideal_from_generators(K: NumberField, gens: Sequence) -> IdealLattice:
    """The ideal generated by the given elements (HNF of all products with the basis)."""
    cols = []
    for g in gens:
        g = g if isinstance(g, FieldElement) else K.element(g)
        if not g.is_integral():
            raise ValueError("ideal generators must be integral")
        cols.extend(g.mult_matrix().columns())
    if not cols:
        raise ValueError("no generators")
    H, _ = hnf(RationalMatrix.from_columns(cols))
    B = RationalMatrix.from_columns(H.columns()[: K.d])
    return IdealLattice(K, B)


def ideal_from_json(K: NumberField, obj) -> IdealLattice:
    b = obj["basis"]
    B = RationalMatrix.from_json(b) if isinstance(b, dict) else RationalMatrix(b)
    H, _ = hnf(B)
    return IdealLattice(K, H)
