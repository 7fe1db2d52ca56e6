"""Exact lattice-point enumeration and counting.

Points are scanned coordinate by coordinate on the lower-triangular Hermite
basis of the lattice: the k-th coordinate of ``H a`` only depends on
``a_1..a_k``, which turns orthant and box constraints into per-coordinate
integer ranges. A positive definite quadratic bound is completed to squares
in the same variable order, so every range is exact (no floating point is
trusted; float guesses are corrected by exact tests).
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .lattice import Cone, Lattice, PositiveBasis, transport
from .linalg import RationalMatrix, RationalVector, to_fraction

DEFAULT_MAX_POINTS = 10_000_000


class EnumerationLimitError(RuntimeError):
    pass


def max_points() -> int:
    return int(os.environ.get("CONEGAPS_MAX_POINTS", DEFAULT_MAX_POINTS))


def _reverse_squares(A: list) -> tuple:
    """Write v^T A v = sum_k D[k] * (v_k + sum_{j<k} W[k][j] v_j)^2."""
    n = len(A)
    S = [[to_fraction(x) for x in row] for row in A]
    D = [Fraction(0)] * n
    W = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n - 1, -1, -1):
        p = S[k][k]
        if p <= 0:
            raise ValueError("quadratic form is not positive definite")
        D[k] = p
        for j in range(k):
            W[k][j] = S[k][j] / p
        for i in range(k):
            for j in range(k):
                S[i][j] -= S[i][k] * S[k][j] / p
    return D, W


def _max_int_below_sqrt(q: Fraction, e: Fraction, h: Fraction) -> int:
    """Largest integer a with h*a + e <= sqrt(q)   (h > 0, q >= 0)."""

    def ok(a):
        x = h * a + e
        return x <= 0 or x * x <= q

    a = math.floor((math.sqrt(float(q)) - float(e)) / float(h))
    while ok(a + 1):
        a += 1
    while not ok(a):
        a -= 1
    return a


def _ceil_div(x: Fraction, h: Fraction) -> int:
    return math.ceil(x / h)


def _floor_div(x: Fraction, h: Fraction) -> int:
    return math.floor(x / h)


class _Scanner:
    def __init__(self, H, form=None, radius2=None, center=None, lower=None, upper=None):
        self.H = [[to_fraction(x) for x in row] for row in H]
        d = self.d = len(self.H)
        for k in range(d):
            if self.H[k][k] <= 0 or any(self.H[k][j] != 0 for j in range(k + 1, d)):
                raise ValueError("scanner needs a lower-triangular basis with positive diagonal")
        if form is not None:
            self.D, self.W = _reverse_squares(form)
            self.r2 = to_fraction(radius2)
        else:
            self.D = None
            self.r2 = None
        self.center = [to_fraction(c) for c in center] if center is not None else [Fraction(0)] * d
        self.lower = [None if x is None else to_fraction(x) for x in (lower or [None] * d)]
        self.upper = [None if x is None else to_fraction(x) for x in (upper or [None] * d)]
        if self.D is None and (None in self.lower or None in self.upper):
            raise ValueError("unbounded region: give a quadratic bound or a full box")
        self.limit = max_points()
        self.work = 0

    def _range(self, k, a, v, u, r):
        H = self.H
        h = H[k][k]
        base = sum((H[k][j] * a[j] for j in range(k)), Fraction(0))
        lo = hi = None
        e = None
        if self.D is not None:
            if r < 0:
                return None
            e = base - self.center[k] + sum((self.W[k][j] * u[j] for j in range(k)), Fraction(0))
            q = r / self.D[k]
            hi = _max_int_below_sqrt(q, e, h)
            lo = -_max_int_below_sqrt(q, -e, h)
        if self.lower[k] is not None:
            c = _ceil_div(self.lower[k] - base, h)
            lo = c if lo is None else max(lo, c)
        if self.upper[k] is not None:
            c = _floor_div(self.upper[k] - base, h)
            hi = c if hi is None else min(hi, c)
        if lo > hi:
            return None
        return lo, hi, base, h, e

    def _tick(self, n=1):
        self.work += n
        if self.work > self.limit:
            raise EnumerationLimitError(
                f"enumeration exceeded CONEGAPS_MAX_POINTS={self.limit}; raise the cap or shrink the region"
            )

    def count(self) -> int:
        d = self.d
        a = [0] * d
        v = [Fraction(0)] * d
        u = [Fraction(0)] * d

        def rec(k, r):
            rng = self._range(k, a, v, u, r)
            if rng is None:
                return 0
            lo, hi, base, h, e = rng
            if k == d - 1:
                return hi - lo + 1
            self._tick(hi - lo + 1)
            total = 0
            for ak in range(lo, hi + 1):
                a[k] = ak
                v[k] = base + h * ak
                u[k] = v[k] - self.center[k]
                nr = r
                if self.D is not None:
                    x = h * ak + e
                    nr = r - self.D[k] * x * x
                total += rec(k + 1, nr)
            return total

        return rec(0, self.r2)

    def points(self):
        d = self.d
        a = [0] * d
        v = [Fraction(0)] * d
        u = [Fraction(0)] * d

        def rec(k, r):
            rng = self._range(k, a, v, u, r)
            if rng is None:
                return
            lo, hi, base, h, e = rng
            for ak in range(lo, hi + 1):
                a[k] = ak
                v[k] = base + h * ak
                u[k] = v[k] - self.center[k]
                if k == d - 1:
                    self._tick()
                    yield tuple(v)
                else:
                    nr = r
                    if self.D is not None:
                        x = h * ak + e
                        nr = r - self.D[k] * x * x
                    yield from rec(k + 1, nr)

        yield from rec(0, self.r2)


def _identity_form(d: int) -> list:
    return [[int(i == j) for j in range(d)] for i in range(d)]


def _hnf_rows(L: Lattice) -> list:
    return L.hnf().tolist()


def lattice_points(L: Lattice, *, form=None, radius2=None, center=None, lower=None, upper=None) -> list:
    """All points ``v`` of ``L`` in the region, as RationalVectors.

    The region is the intersection of ``(v - center)^T form (v - center) <= radius2``
    (if ``form`` is given) with the coordinate box ``lower <= v <= upper``.
    """
    sc = _Scanner(_hnf_rows(L), form, radius2, center, lower, upper)
    return [RationalVector(p) for p in sc.points()]


def count_lattice_points(L: Lattice, *, form=None, radius2=None, center=None, lower=None, upper=None) -> int:
    return _Scanner(_hnf_rows(L), form, radius2, center, lower, upper).count()


def _gram(M: RationalMatrix) -> list:
    return (M.T @ M).tolist()


def count_ball(L: Lattice, t) -> int:
    t = to_fraction(t)
    return count_lattice_points(L, form=_identity_form(L.dim), radius2=t * t)


def count_positive(L: Lattice, t) -> int:
    """N(L+, t): points of L with nonnegative coordinates and norm <= t."""
    t = to_fraction(t)
    d = L.dim
    return count_lattice_points(L, form=_identity_form(d), radius2=t * t, lower=[0] * d)


def count_semigroup(X: PositiveBasis | RationalMatrix, t) -> int:
    """N(S(X), t) by scanning nonnegative coefficient vectors a with |X a| <= t."""
    t = to_fraction(t)
    M = X.matrix if isinstance(X, PositiveBasis) else X
    d = M.rows
    sc = _Scanner(_identity_form(d), _gram(M), t * t, lower=[0] * d)
    return sc.count()


def semigroup_coefficients(X: PositiveBasis | RationalMatrix, t) -> list:
    """Nonnegative coefficient vectors a with |X a| <= t (coefficient-space scan)."""
    t = to_fraction(t)
    M = X.matrix if isinstance(X, PositiveBasis) else X
    d = M.rows
    sc = _Scanner(_identity_form(d), _gram(M), t * t, lower=[0] * d)
    return [tuple(int(x) for x in p) for p in sc.points()]


def count_in_cone(L: Lattice, Y: Cone, t) -> int:
    """N(L ∩ cone(Y), t), scanning the positive part of Y^{-1} L."""
    t = to_fraction(t)
    M = transport(L, Y)
    d = L.dim
    return count_lattice_points(M, form=_gram(Y.generators), radius2=t * t, lower=[0] * d)


class Region(str, enum.Enum):
    BALL = "BALL"
    CUBE = "CUBE"
    CONE_BALL = "CONE_BALL"


class PointSet(str, enum.Enum):
    LATTICE = "LATTICE"
    L_PLUS = "L_PLUS"
    SEMIGROUP = "SEMIGROUP"
    GAPS = "GAPS"
    L_OF_Y = "L_OF_Y"
    GAPS_IN_Y = "GAPS_IN_Y"


@dataclass(frozen=True)
class CountQuery:
    region: Region
    set: PointSet
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "region", Region(self.region))
        object.__setattr__(self, "set", PointSet(self.set))
        object.__setattr__(self, "t", to_fraction(self.t))
        if self.t <= 0:
            raise ValueError("radius must be positive")


def enumerate_region(L: Lattice, region, t, cone: Optional[Cone] = None) -> list:
    """Points of L in the closed ball, cube, or cone-and-ball of radius t, sorted."""
    region = Region(region)
    t = to_fraction(t)
    d = L.dim
    if region is Region.BALL:
        pts = lattice_points(L, form=_identity_form(d), radius2=t * t)
    elif region is Region.CUBE:
        pts = lattice_points(L, lower=[-t] * d, upper=[t] * d)
    else:
        if cone is None:
            raise ValueError("CONE_BALL region needs a cone")
        M = transport(L, cone)
        pts = [cone.generators @ p for p in
               lattice_points(M, form=_gram(cone.generators), radius2=t * t, lower=[0] * d)]
    return sorted(pts)


def _member_predicate(S: PointSet, X: Optional[PositiveBasis], Y: Optional[Cone]):
    def in_X(v):
        return all(c >= 0 for c in X.coefficients(v))

    if S is PointSet.LATTICE:
        return lambda v: True
    if S is PointSet.L_PLUS:
        return lambda v: all(x >= 0 for x in v)
    if S is PointSet.SEMIGROUP:
        return in_X
    if S is PointSet.GAPS:
        return lambda v: all(x >= 0 for x in v) and not in_X(v)
    if S is PointSet.L_OF_Y:
        return Y.contains
    return lambda v: Y.contains(v) and not in_X(v)


def _check_context(S: PointSet, X, Y) -> None:
    if S in (PointSet.SEMIGROUP, PointSet.GAPS, PointSet.GAPS_IN_Y) and X is None:
        raise ValueError(f"{S.value} count needs a basis X")
    if S in (PointSet.L_OF_Y, PointSet.GAPS_IN_Y) and Y is None:
        raise ValueError(f"{S.value} count needs a cone Y")


def count(L: Lattice, query: CountQuery, X=None, Y: Optional[Cone] = None) -> int:
    """Exact N(set, t) for the query; gap sets are counted as differences."""
    S = query.set
    _check_context(S, X, Y)
    t = query.t
    if query.region is Region.BALL:
        if S is PointSet.LATTICE:
            return count_ball(L, t)
        if S is PointSet.L_PLUS:
            return count_positive(L, t)
        if S is PointSet.SEMIGROUP:
            return count_semigroup(X, t)
        if S is PointSet.GAPS:
            return count_positive(L, t) - count_semigroup(X, t)
        if S is PointSet.L_OF_Y:
            return count_in_cone(L, Y, t)
        return count_in_cone(L, Y, t) - count_semigroup(X, t)
    pred = _member_predicate(S, X, Y)
    return sum(1 for v in enumerate_region(L, query.region, t, cone=Y) if pred(v))


def count_semigroup_by_points(L: Lattice, X: PositiveBasis, t) -> int:
    """N(S(X), t) by scanning L+ in point space and testing cone membership."""
    t = to_fraction(t)
    d = L.dim
    pts = lattice_points(L, form=_identity_form(d), radius2=t * t, lower=[0] * d)
    return sum(1 for v in pts if all(c >= 0 for c in X.coefficients(v)))
