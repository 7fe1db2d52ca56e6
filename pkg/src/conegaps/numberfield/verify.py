"""Ideal lattices under the Minkowski embedding and the ideal-gap bounds."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..enumeration import lattice_points
from ..gaps import Status
from ..interval import Interval, root_bounds, sqrt_bounds
from ..lattice import _coefficient_shell
from ..linalg import IndependenceTracker, RationalMatrix, RationalVector, det, extend_primitive, gcd_vector
from .field import FieldElement, IdealLattice, NumberField, totally_positive
from .heights import MAX_BITS, Verdict, decide, sup_norm, weil_height


@dataclass(frozen=True)
class MinkowskiLattice:
    """Sigma(I): entries sigma_k(beta_j) as intervals, norms through the exact gram."""

    ideal: IdealLattice
    matrix: tuple  # rows k, columns j
    gram: RationalMatrix
    det_interval: Interval
    bits: int

    def norm2(self, coeffs) -> Fraction:
        c = RationalVector(coeffs)
        return c.dot(self.gram @ c)

    def to_json(self) -> dict:
        return {
            "sigma": [[list(x.to_floats()) for x in row] for row in self.matrix],
            "gram": self.gram.to_json(),
            "det": list(self.det_interval.to_floats()),
            "det_squared": str(det(self.gram)),
            "bits": self.bits,
        }


def _interval_det(rows: list) -> Interval:
    n = len(rows)
    total = Interval.point(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Interval.point(-1 if inv % 2 else 1)
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + term
    return total


def minkowski_lattice(K: NumberField, I: IdealLattice, bits: int = 64) -> MinkowskiLattice:
    if bits <= 0:
        raise ValueError("precision must be positive")
    betas = I.elements()
    rows = tuple(tuple(b.conjugate(k, bits) for b in betas) for k in range(K.d))
    return MinkowskiLattice(I, rows, I.gram, abs(_interval_det([list(r) for r in rows])), bits)


@dataclass(frozen=True)
class PositiveIdealBasis:
    ideal: IdealLattice
    elements: tuple
    change: RationalMatrix  # ideal-basis coefficients of each element, as columns

    def coefficients(self, alpha: FieldElement) -> RationalVector:
        c = self.ideal.coefficients(alpha)
        if c is None:
            raise ValueError("element is not in the ideal")
        from ..linalg import invert

        return invert(self.change) @ RationalVector(c)

    def classify(self, alpha: FieldElement) -> Status:
        if not totally_positive(self.ideal.field, alpha):
            return Status.NOT_IN_L_PLUS
        a = self.coefficients(alpha)
        return Status.SEMIGROUP if all(x >= 0 for x in a) else Status.GAP

    def to_json(self) -> dict:
        return {"elements": [e.to_json() for e in self.elements], "change_of_basis": self.change.to_json()}


def _strictly_positive(alpha: FieldElement) -> bool:
    return not alpha.is_zero() and all(s > 0 for s in alpha.signs())


def _positive_pool(I: IdealLattice, extra_shells: int = 2) -> list:
    d = I.field.d
    R0 = next(R for R in itertools.count(1)
              if any(_strictly_positive(I.element(a)) for a in _coefficient_shell(d, R)))
    seen, pool = set(), []
    for R in range(1, R0 + extra_shells + 1):
        for a in _coefficient_shell(d, R):
            if gcd_vector(a) == 1 and a not in seen and _strictly_positive(I.element(a)):
                seen.add(a)
                pool.append(a)
    return pool


def _push_multiplier(bi: FieldElement, b1: FieldElement) -> int:
    """Least M >= 0 (when certifiable) with sigma_k(bi + M b1) >= 1 for all k."""
    M = 0
    for k in range(bi.field.d):
        bits = 32
        while True:
            q = (1 - bi.conjugate(k, bits)) / b1.conjugate(k, bits)
            c = q.ceil()
            if c is not None or bits >= 256:
                break
            bits *= 2
        M = max(M, c if c is not None else math.ceil(q.hi))
    return M


def positive_ideal_basis(K: NumberField, I: IdealLattice, seed: int = 0) -> PositiveIdealBasis:
    """A Z-basis of I made of strictly totally positive elements.

    A seeded strictly positive primitive element starts the basis; a
    unimodular completion supplies the rest, each pushed by a multiple of the
    first element until all of its conjugates are at least 1.
    """
    pool = _positive_pool(I)
    a = random.Random(seed).choice(pool)
    A = extend_primitive(a)
    elems = [I.element(A.col(j)) for j in range(K.d)]
    E = [[int(i == j) for j in range(K.d)] for i in range(K.d)]
    for i in range(1, K.d):
        E[0][i] = _push_multiplier(elems[i], elems[0])
    C = A @ RationalMatrix(E)
    elems = tuple(I.element(C.col(j)) for j in range(K.d))
    for e in elems:
        if not _strictly_positive(e):
            raise AssertionError("pushed basis element is not totally positive")
    G = C.T @ I.gram @ C
    if all(G[i, j] == 0 for i in range(K.d) for j in range(K.d) if i != j):
        raise AssertionError("positive basis came out orthogonal")
    return PositiveIdealBasis(I, elems, C)


def positive_basis_from_elements(I: IdealLattice, elements) -> PositiveIdealBasis:
    """Validate a user-supplied totally positive Z-basis of I."""
    cols = []
    for e in elements:
        c = I.coefficients(e)
        if c is None:
            raise ValueError(f"{e!r} is not in the ideal")
        if not totally_positive(I.field, e):
            raise ValueError(f"{e!r} is not totally positive")
        cols.append(c)
    C = RationalMatrix.from_columns(cols)
    if abs(det(C)) != 1:
        raise ValueError("elements do not form a Z-basis of the ideal")
    return PositiveIdealBasis(I, tuple(elements), C)


@dataclass(frozen=True)
class IdealMinima:
    elements: tuple
    coefficients: tuple
    sup_norms: tuple  # intervals


def _enumerate_ideal(I: IdealLattice, radius2: Fraction) -> list:
    d = I.field.d
    Z = type(I.basis).identity(d)
    from ..lattice import Lattice

    return [p.as_ints() for p in lattice_points(Lattice(Z), form=I.gram.tolist(), radius2=radius2)]


def ideal_minima(K: NumberField, I: IdealLattice, bits: int = 64) -> IdealMinima:
    """Sup-norm successive minima elements of Sigma(I).

    Every element with |Sigma| <= T has trace form at most d T^2, so the
    exact-gram ellipsoid of that radius is searched; T doubles until the
    chain's last sup-norm is certainly at most T.
    """
    d = K.d
    T = root_bounds(Fraction(I.norm ** 2) * abs(K.discriminant), 2 * d, 4)[1]
    T = max(T, Fraction(1))
    while True:
        cand = [c for c in _enumerate_ideal(I, d * T * T) if any(c)]
        scored = []
        for c in cand:
            s = sup_norm(I.element(c), bits)
            scored.append((s.lo, s.hi, tuple(-x for x in c), c, s))
        scored.sort()
        tracker = IndependenceTracker(d)
        chain = []
        for *_, c, s in scored:
            if tracker.add(c):
                chain.append((c, s))
                if len(chain) == d:
                    break
        if len(chain) == d and chain[-1][1].hi <= T:
            return IdealMinima(tuple(I.element(c) for c, _ in chain), tuple(c for c, _ in chain),
                               tuple(s for _, s in chain))
        T *= 2


@dataclass(frozen=True)
class Bound:
    name: str
    verdict: Verdict
    lhs: Interval
    rhs: Interval
    bits: int
    power: int  # both sides were compared after raising to this power

    def to_json(self) -> dict:
        lhs = self.lhs.root(self.power, 64)
        rhs = self.rhs.root(self.power, 64)
        return {
            "name": self.name,
            "lhs": list(lhs.to_floats()),
            "rhs_lo": rhs.to_floats()[0],
            "rhs_hi": rhs.to_floats()[1],
            "holds": self.verdict is Verdict.HOLDS,
            "verdict": self.verdict.value,
            "bits": self.bits,
        }


def _bound(name, fn, max_bits, power) -> Bound:
    v, bits, lhs, rhs = decide(fn, max_bits=max_bits)
    return Bound(name, v, lhs, rhs, bits, power)


@dataclass(frozen=True)
class IdealGapRecord:
    bounds: tuple
    minima: tuple
    plus_chain: tuple
    gaps: tuple  # (alpha, multiplier, coefficients in beta)
    basis: PositiveIdealBasis

    @property
    def holds(self) -> bool:
        return all(b.verdict is Verdict.HOLDS for b in self.bounds)

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "bounds": [b.to_json() for b in self.bounds],
            "minima_elements": [e.to_json() for e in self.minima],
            "positive_chain": [e.to_json() for e in self.plus_chain],
            "gaps": [
                {"alpha": a.to_json(), "multiplier": m, "beta_coefficients": [str(x) for x in c]}
                for a, m, c in self.gaps
            ],
            "basis": self.basis.to_json(),
        }


def _prod_height_power(elems, bits) -> Interval:
    out = Interval.point(1)
    for e in elems:
        out = out * weil_height(e.field, e, bits).power
    return out


def _box_point(I: IdealLattice, r: Fraction, bits: int = 64) -> FieldElement:
    """Smallest-trace element with every conjugate in [1, 2r + 1] (certified)."""
    d = I.field.d
    top = 2 * r + 1
    found = []
    for c in _enumerate_ideal(I, d * top * top):
        e = I.element(c)
        cs = e.conjugates(bits)
        if all(x.lo >= 1 and x.hi <= top for x in cs):
            found.append((RationalVector(c).dot(I.gram @ RationalVector(c)), c, e))
    if not found:
        raise AssertionError("no element of the ideal in the positive box; radius below the covering radius")
    return min(found, key=lambda t: (t[0], t[1]))[2]


def _plus_chain(K: NumberField, I: IdealLattice, mins: IdealMinima, bits: int = 64) -> tuple:
    d = K.d
    lam_hi = sum((s.hi for s in mins.sup_norms), Fraction(0))
    r = sqrt_bounds(Fraction(d), 32)[1] / 2 * lam_hi  # Jarnik bound on the covering radius
    y = _box_point(I, r, bits)
    yc = I.coefficients(y)
    j = None
    for k in range(d):
        tr = IndependenceTracker(d)
        for i in range(d):
            if i != k:
                tr.add(mins.coefficients[i])
        if tr.is_independent(yc):
            j = k
            break
    chain = [y]
    for i in range(d):
        if i == j:
            continue
        m = math.ceil(mins.sup_norms[i].hi)
        e = y * m + mins.elements[i]
        if not totally_positive(K, e):
            raise AssertionError("chain element is not totally positive")
        chain.append(e)
    return tuple(chain), r


def ideal_gap_elements(K: NumberField, beta: PositiveIdealBasis) -> list:
    """alpha_i = a_i beta'_i - beta_i with a_i = max_k floor(sigma_k(beta_i / beta'_i)) + 1."""
    d = K.d
    b = beta.elements
    out = []
    for i in range(d):
        bp = sum((b[j] for j in range(d) if j != i), K.zero)
        g = b[i] / bp
        if g.is_rational():
            a = math.floor(g.power[0] if g.power else 0) + 1
        else:
            a = None
            bits = 32
            while a is None:
                fl = [g.conjugate(k, bits).floor() for k in range(d)]
                if None not in fl:
                    a = max(fl) + 1
                bits *= 2
        alpha = bp * a - b[i]
        coeffs = beta.coefficients(alpha)
        if beta.classify(alpha) is not Status.GAP:
            raise AssertionError(f"constructed element {alpha!r} is not a gap")
        out.append((alpha, a, tuple(coeffs), bp, g))
    M = RationalMatrix.from_columns([RationalVector(I_c) for I_c in (beta.ideal.coefficients(x[0]) for x in out)])
    if det(M) == 0:
        raise AssertionError("constructed gaps are dependent")
    return out


def verify_ideal_gaps(K: NumberField, I: IdealLattice, beta: Optional[PositiveIdealBasis] = None, *,
                      seed: int = 0, max_bits: int = MAX_BITS) -> IdealGapRecord:
    """Check the three height bounds for successive minima, positive elements and gaps of I."""
    d = K.d
    beta = beta or positive_ideal_basis(K, I, seed)
    det2 = Fraction(I.norm ** 2) * abs(K.discriminant)  # (N(I) sqrt|Delta|)^2
    bounds = []
    mins = ideal_minima(K, I)
    bounds.append(_bound(
        "prod h(s_i) <= N(I) sqrt|Delta|",
        lambda b: (_prod_height_power(mins.elements, b) ** 2, Interval.point(det2 ** d)), max_bits, 2 * d))

    def prod_sup(b):
        out = Interval.point(1)
        for e in mins.elements:
            out = out * sup_norm(e, b)
        return out ** 2, Interval.point(det2)

    bounds.append(_bound("prod |Sigma(s_i)| <= N(I) sqrt|Delta|", prod_sup, max_bits, 2))
    chain, r = _plus_chain(K, I, mins)
    const = Fraction(9 * d ** 3) ** (d * d) * det2 ** (d * (d + 1))  # ((3d sqrt d)^d (N sqrt|D|)^(d+1))^(2d)
    bounds.append(_bound(
        "prod h(alpha_i) <= (3d sqrt d)^d (N(I) sqrt|Delta|)^(d+1)",
        lambda b: (_prod_height_power(chain, b) ** 2, Interval.point(const)), max_bits, 2 * d))
    gaps = ideal_gap_elements(K, beta)
    for i, (alpha, a, coeffs, bp, g) in enumerate(gaps):
        def fn(b, alpha=alpha, bp=bp, g=g):
            lhs = weil_height(K, alpha, b).power
            rhs = ((weil_height(K, g, b).power + 1) * weil_height(K, bp, b).power) ** d
            return lhs, rhs

        bounds.append(_bound(f"h(alpha_{i + 1}) <= (h(beta_{i + 1}/beta'_{i + 1})^d + 1) h(beta'_{i + 1})^d", fn,
                             max_bits, d))
    return IdealGapRecord(tuple(bounds), mins.elements, chain, tuple((a, m, c) for a, m, c, _, _ in gaps), beta)
