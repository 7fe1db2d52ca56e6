"""Weil heights with certified enclosures, and decided height inequalities.

For nonzero gamma with primitive integer characteristic polynomial of
leading coefficient c, the d-th power of the height is
c * prod_i max(1, |sigma_i(gamma)|); this is what ``HeightValue.power``
encloses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from ..interval import Interval
from . import poly as P
from .field import FieldElement, NumberField

DEFAULT_BITS = 64
MAX_BITS = 256


class Verdict(str, enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class HeightValue:
    power: Interval  # h^d
    d: int
    bits: int

    @property
    def interval(self) -> Interval:
        return self.power.root(self.d, self.bits + 4)

    @property
    def log(self) -> tuple:
        lo, hi = self.power.to_floats()
        return math.log(lo) / self.d, math.log(hi) / self.d

    def to_json(self) -> dict:
        lo, hi = self.interval.to_floats()
        return {"lo": lo, "hi": hi}


def _leading_coefficient(gamma: FieldElement) -> int:
    return P.primitive_integer(gamma.charpoly())[-1]


def _abs_max1(x: Interval) -> Interval:
    return abs(x).max(1)


def weil_height(K: NumberField, gamma: FieldElement, bits: int = DEFAULT_BITS, den: Optional[FieldElement] = None
                ) -> HeightValue:
    """Height of gamma (or of gamma/den) as a certified interval."""
    if den is not None:
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        gamma = gamma / den
    if gamma.field is not K:
        raise ValueError("element of another field")
    if gamma.is_zero():
        raise ValueError("the height of 0 is not defined here")
    c = _leading_coefficient(gamma)
    prod = Interval.point(c)
    for s in gamma.conjugates(bits + 8):
        prod = prod * _abs_max1(s)
    return HeightValue(prod, K.d, bits)


def sup_norm(alpha: FieldElement, bits: int = DEFAULT_BITS) -> Interval:
    """|Sigma(alpha)| = max_i |sigma_i(alpha)|."""
    vals = [abs(s) for s in alpha.conjugates(bits)]
    out = vals[0]
    for v in vals[1:]:
        out = out.max(v)
    return out


def decide(fn: Callable[[int], tuple], start: int = 32, max_bits: int = MAX_BITS) -> tuple:
    """Refine ``lhs <= rhs`` with fn(bits) -> (lhs, rhs) intervals until settled."""
    bits = start
    while True:
        lhs, rhs = fn(bits)
        if lhs.hi <= rhs.lo:
            return Verdict.HOLDS, bits, lhs, rhs
        if lhs.lo > rhs.hi:
            return Verdict.FAILS, bits, lhs, rhs
        if bits >= max_bits:
            return Verdict.UNDECIDED, bits, lhs, rhs
        bits = min(2 * bits, max_bits)


def modulus_classes(alpha: FieldElement, max_bits: int = MAX_BITS):
    """Group the embeddings by the exact value of |sigma_i(alpha)|.

    The number of distinct values of sigma_i(alpha^2) is the degree of the
    squarefree part of its characteristic polynomial; intervals are refined
    until exactly that many disjoint clusters appear, which pins each cluster
    to one value. Returns (clusters, bits) with clusters sorted by value, each
    a pair (indices, enclosure of |sigma|^2); None if max_bits is reached.
    """
    w = alpha * alpha
    m = P.squarefree_degree(w.charpoly())
    bits = 16
    while bits <= max_bits:
        vals = w.conjugates(bits)
        order = sorted(range(len(vals)), key=lambda i: vals[i].lo)
        clusters = []
        for i in order:
            if clusters and vals[i].lo <= clusters[-1][1].hi:
                idx, hull = clusters[-1]
                clusters[-1] = (idx + [i], Interval(hull.lo, max(hull.hi, vals[i].hi)))
            else:
                clusters.append(([i], vals[i]))
        if len(clusters) == m:
            return clusters, bits
        bits *= 2
    return None


@dataclass(frozen=True)
class HeightCheck:
    alpha: FieldElement
    height: HeightValue
    sup: Interval
    verdicts: tuple  # (name, Verdict, how)

    @property
    def holds(self) -> bool:
        return all(v is Verdict.HOLDS for _, v, _ in self.verdicts)

    def to_json(self) -> dict:
        lo, hi = self.sup.to_floats()
        plo, phi = self.height.power.to_floats()
        return {
            "alpha": self.alpha.to_json(),
            "height": self.height.to_json(),
            "sup_norm": {"lo": lo, "hi": hi},
            "height_power_d": {"lo": plo, "hi": phi},
            "checks": [{"name": n, "verdict": v.value, "decided_by": how} for n, v, how in self.verdicts],
        }


def _monomial(clusters, exps: dict) -> Interval:
    out = Interval.point(1)
    for k, e in exps.items():
        if e:
            out = out * clusters[k][1] ** e
    return out


def check_height_inequalities(K: NumberField, alpha: FieldElement, max_bits: int = MAX_BITS) -> HeightCheck:
    """Decide 1 <= h(alpha) <= |Sigma(alpha)| <= h(alpha)^d for one nonzero alpha.

    All three sides are products of squared conjugate moduli per exact
    modulus class, so each inequality reads prod w_k^(e_k) <= 1. A zero
    exponent vector is an exact equality; otherwise the classes are refined
    until the interval of the product separates from 1.
    """
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    d = K.d
    c = _leading_coefficient(alpha)
    names = ("1 <= h(alpha)", "h(alpha) <= |Sigma(alpha)|", "|Sigma(alpha)| <= h(alpha)^d")
    prof = modulus_classes(alpha, max_bits)
    if prof is None:
        return HeightCheck(alpha, weil_height(K, alpha), sup_norm(alpha),
                           tuple((n, Verdict.UNDECIDED, "modulus classes not separated") for n in names))
    clusters, bits0 = prof
    unit_class = (alpha * alpha) == 1
    verdicts = []
    # classify each cluster against 1 (exactly 1 only when alpha = +-1)
    bits = bits0
    side = [0 if unit_class else None for _ in clusters]
    while None in side and bits <= max_bits:
        w = (alpha * alpha).conjugates(bits)
        for k, (idx, _) in enumerate(clusters):
            hull = w[idx[0]]
            for i in idx[1:]:
                hull = Interval(min(hull.lo, w[i].lo), max(hull.hi, w[i].hi))
            clusters[k] = (idx, hull)
            if side[k] is None:
                side[k] = 1 if hull.lo > 1 else (-1 if hull.hi < 1 else None)
        bits *= 2
    if None in side:
        return HeightCheck(alpha, weil_height(K, alpha), sup_norm(alpha),
                           tuple((n, Verdict.UNDECIDED, "class vs 1 not separated") for n in names))
    top = len(clusters) - 1
    big = {k: len(clusters[k][0]) for k in range(len(clusters)) if side[k] > 0}
    # squared forms over classes: h^(2d) = c^2 prod_big w^n ; |Sigma|^2 = w_top
    forms = [
        ({}, dict(big), 1, c * c),  # 1 <= h^(2d)
        (dict(big), {top: d}, c * c, 1),  # h^(2d) <= |Sigma|^(2d)
        ({top: 1}, dict(big), 1, c * c),  # |Sigma|^2 <= h^(2d)
    ]
    for name, (lhs, rhs, cl, cr) in zip(names, forms):
        exps = {k: lhs.get(k, 0) - rhs.get(k, 0) for k in set(lhs) | set(rhs)}
        if side[top] == 0:
            exps = {}
        if all(e == 0 for e in exps.values()) and cl == cr:
            verdicts.append((name, Verdict.HOLDS, "exact equality"))
            continue
        ratio = Fraction(cl, cr)

        def fn(b, exps=exps, ratio=ratio):
            w = (alpha * alpha).conjugates(b)
            cls = [(idx, _hull(w, idx)) for idx, _ in clusters]
            return _monomial(cls, exps) * ratio, Interval.point(1)

        v, used, _, _ = decide(fn, start=bits0, max_bits=max_bits)
        verdicts.append((name, v, f"intervals at {used} bits"))
    return HeightCheck(alpha, weil_height(K, alpha), sup_norm(alpha), tuple(verdicts))


def _hull(w: list, idx: list) -> Interval:
    lo = min(w[i].lo for i in idx)
    hi = max(w[i].hi for i in idx)
    return Interval(lo, hi)


@dataclass(frozen=True)
class HeightRecord:
    checks: tuple
    max_bits: int

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    @property
    def undecided(self) -> int:
        return sum(1 for c in self.checks for _, v, _ in c.verdicts if v is Verdict.UNDECIDED)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks for _, v, _ in c.verdicts if v is Verdict.FAILS)

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "max_bits": self.max_bits,
            "undecided": self.undecided,
            "failed": self.failed,
            "elements": [c.to_json() for c in self.checks],
        }


def verify_height_inequalities(K: NumberField, alphas: Iterable[FieldElement], max_bits: int = MAX_BITS
                               ) -> HeightRecord:
    checks = []
    for a in alphas:
        if not a.is_integral():
            raise ValueError(f"{a!r} is not an algebraic integer of the order")
        checks.append(check_height_inequalities(K, a, max_bits))
    return HeightRecord(tuple(checks), max_bits)


def random_integers(K: NumberField, count: int, seed: int = 0, bound: int = 5) -> list:
    """Seeded random nonzero elements with integer coordinates in [-bound, bound]."""
    import random

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a = K.element([rng.randint(-bound, bound) for _ in range(K.d)])
        if not a.is_zero():
            out.append(a)
    return out
