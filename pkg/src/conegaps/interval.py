"""Closed intervals with exact rational endpoints.

Arithmetic on rational endpoints is exact, so the enclosures are always
valid; only roots (square, n-th) introduce rounding, and they round outward
to a dyadic grid of the requested number of bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .linalg import to_fraction


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1."""
    if n < 0:
        raise ValueError("negative radicand")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def root_bounds(q: Fraction, k: int, bits: int) -> tuple:
    """Dyadic ``(lo, hi)`` with lo <= q**(1/k) <= hi and hi - lo <= 2**-bits."""
    q = to_fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    scale = 1 << (bits * k)
    s = iroot(q.numerator * scale // q.denominator, k)
    lo = Fraction(s, 1 << bits)
    hi = lo if lo ** k == q else Fraction(s + 1, 1 << bits)
    return lo, hi


def sqrt_bounds(q, bits: int) -> tuple:
    return root_bounds(to_fraction(q), 2, bits)


def rational_leq_sqrt(r, q) -> bool:
    """Exact test r <= sqrt(q) for rationals r and q >= 0."""
    r, q = to_fraction(r), to_fraction(q)
    return r <= 0 or r * r <= q


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", to_fraction(self.lo))
        object.__setattr__(self, "hi", to_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = to_fraction(x)
        return cls(x, x)

    @staticmethod
    def of(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval.point(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= to_fraction(x) <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other) -> "Interval":
        o = Interval.of(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        return self + (-Interval.of(other))

    def __rsub__(self, other) -> "Interval":
        return Interval.of(other) - self

    def __mul__(self, other) -> "Interval":
        o = Interval.of(other)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Interval":
        return self * Interval.of(other).reciprocal()

    def __rtruediv__(self, other) -> "Interval":
        return Interval.of(other) * self.reciprocal()

    def __pow__(self, n: int) -> "Interval":
        if n < 0:
            return (self ** (-n)).reciprocal()
        if n == 0:
            return Interval.point(1)
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 0:
            if self.lo <= 0 <= self.hi:
                return Interval(0, max(a, b))
            return Interval(min(a, b), max(a, b))
        return Interval(a, b)

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def max(self, other) -> "Interval":
        o = Interval.of(other)
        return Interval(max(self.lo, o.lo), max(self.hi, o.hi))

    def root(self, k: int, bits: int) -> "Interval":
        if self.lo < 0:
            raise ValueError("root of an interval with negative part")
        return Interval(root_bounds(self.lo, k, bits)[0], root_bounds(self.hi, k, bits)[1])

    def sqrt(self, bits: int) -> "Interval":
        return self.root(2, bits)

    def sign(self):
        """+1 / -1 when certain, 0 for the point zero, None when undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def floor(self):
        """floor() of every point, when it is the same integer; else None."""
        a, b = math.floor(self.lo), math.floor(self.hi)
        return a if a == b else None

    def ceil(self):
        a, b = math.ceil(self.lo), math.ceil(self.hi)
        return a if a == b else None

    def certainly_le(self, other) -> bool:
        return self.hi <= Interval.of(other).lo

    def certainly_lt(self, other) -> bool:
        return self.hi < Interval.of(other).lo

    def __float__(self) -> float:
        return float(self.mid)

    def to_floats(self) -> tuple:
        """Outward-rounded float endpoints."""
        lo, hi = float(self.lo), float(self.hi)
        if Fraction(lo) > self.lo:
            lo = math.nextafter(lo, -math.inf)
        if Fraction(hi) < self.hi:
            hi = math.nextafter(hi, math.inf)
        return lo, hi

    def to_json(self) -> dict:
        lo, hi = self.to_floats()
        return {"lo": lo, "hi": hi}
