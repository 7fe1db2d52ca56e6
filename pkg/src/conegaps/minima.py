"""Sup-norm successive minima, the covering radius, and the small-gap bounds.

Minima are exact: all candidate points in a cube are enumerated, the cube
is doubled until it holds ``d`` independent points, and an independent chain
is then extracted greedily from the points sorted by norm. Every point of
norm at most the final cube radius was seen, so the chain is optimal.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .enumeration import lattice_points
from .gaps import gap_height_bound
from .interval import Interval, rational_leq_sqrt, root_bounds, sqrt_bounds
from .lattice import Cone, Lattice, PositiveBasis, transport
from .linalg import IndependenceTracker, RationalMatrix, RationalVector, det, format_fraction, to_fraction

SQRT_BITS = 64


class Family(str, enum.Enum):
    PLAIN = "PLAIN"
    PLUS = "PLUS"
    GAPS = "GAPS"
    CONE = "CONE"
    CONE_GAPS = "CONE_GAPS"


@dataclass(frozen=True)
class MinimaSlice:
    family: Family
    values: tuple
    witnesses: tuple

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "values": [format_fraction(v) for v in self.values],
            "witnesses": [w.to_json() for w in self.witnesses],
        }


@dataclass(frozen=True)
class MinimaReport:
    plain: MinimaSlice
    plus: MinimaSlice
    gaps: Optional[MinimaSlice] = None

    @property
    def lam(self) -> tuple:
        return self.plain.values

    @property
    def lambda_plus(self) -> tuple:
        return self.plus.values

    @property
    def lambda_gaps(self) -> Optional[tuple]:
        return self.gaps.values if self.gaps else None

    def to_json(self) -> dict:
        return {
            "lambda": self.plain.to_json(),
            "lambda_plus": self.plus.to_json(),
            "lambda_gaps": self.gaps.to_json() if self.gaps else None,
        }


def _single_axis_columns(M: RationalMatrix) -> bool:
    """True when every column has one nonzero entry (the cones then coincide)."""
    return all(sum(1 for x in c if x != 0) == 1 for c in M.columns())


def _basis_matrix(X) -> RationalMatrix:
    return X.matrix if isinstance(X, PositiveBasis) else X


def _semigroup_test(Xm: RationalMatrix) -> Callable:
    Xinv = Cone(Xm).inverse

    def in_S(v):
        a = Xinv @ v
        return a.is_integral() and all(c >= 0 for c in a)

    return in_S


def _candidates(L: Lattice, family: Family, t: Fraction, X, cone: Optional[Cone]) -> list:
    d = L.dim
    if family in (Family.PLUS, Family.GAPS):
        pts = lattice_points(L, lower=[0] * d, upper=[t] * d)
    else:
        pts = lattice_points(L, lower=[-t] * d, upper=[t] * d)
    pts = [p for p in pts if not p.is_zero()]
    if family is Family.PLAIN or family is Family.PLUS:
        return pts
    if family is Family.GAPS:
        in_S = _semigroup_test(_basis_matrix(X))
        return [p for p in pts if not in_S(p)]
    pts = [p for p in pts if cone.contains(p)]
    if family is Family.CONE:
        return pts
    in_S = _semigroup_test(_basis_matrix(X))
    return [p for p in pts if not in_S(p)]


def _check_family(L: Lattice, family: Family, X, cone: Optional[Cone]) -> None:
    if family in (Family.GAPS, Family.CONE_GAPS) and X is None:
        raise ValueError(f"{family.value} minima need a basis X")
    if family in (Family.CONE, Family.CONE_GAPS) and cone is None:
        raise ValueError(f"{family.value} minima need a cone")
    if family is Family.GAPS and _single_axis_columns(_basis_matrix(X)):
        raise ValueError("orthogonal basis: the gap set is empty")
    if family is Family.CONE_GAPS:
        Xm = _basis_matrix(X)
        if not all(cone.contains(x) for x in Xm.columns()):
            raise ValueError("X is not contained in the cone")
        if _single_axis_columns(cone.inverse @ Xm):
            raise ValueError("X spans the whole cone: the gap set is empty")


def successive_minima(L: Lattice, family=Family.PLAIN, X=None, cone: Optional[Cone] = None) -> MinimaSlice:
    """Exact sup-norm successive minima of one point family of ``L``.

    Families: PLAIN (all of L), PLUS (L+), GAPS (gaps of S(X) in L+),
    CONE (L inside ``cone``) and CONE_GAPS (gaps of S(X) inside ``cone``).
    Ties between equal sup-norms go to the shorter Euclidean vector, then to
    the lexicographically largest coefficient vector.
    """
    family = Family(family)
    _check_family(L, family, X, cone)
    d = L.dim
    t = root_bounds(L.det_abs, d, 4)[1]
    if t <= 0:
        t = Fraction(1)
    while True:
        pts = _candidates(L, family, t, X, cone)
        tracker = IndependenceTracker(d)
        for p in pts:
            tracker.add(p)
            if len(tracker) == d:
                break
        if len(tracker) == d:
            break
        t *= 2

    def key(p):
        return (p.sup_norm(), p.norm2(), tuple(-c for c in L.inverse @ p))

    pts.sort(key=key)
    tracker = IndependenceTracker(d)
    chain = []
    for p in pts:
        if tracker.add(p):
            chain.append(p)
            if len(chain) == d:
                break
    return MinimaSlice(family, tuple(p.sup_norm() for p in chain), tuple(chain))


def minima_report(L: Lattice, X: Optional[PositiveBasis] = None) -> MinimaReport:
    gaps = None
    if X is not None and not _single_axis_columns(X.matrix):
        gaps = successive_minima(L, Family.GAPS, X)
    return MinimaReport(successive_minima(L), successive_minima(L, Family.PLUS), gaps)


class CoveringMethod(str, enum.Enum):
    EXACT_2D = "EXACT_2D"
    JARNIK_UPPER = "JARNIK_UPPER"
    SAMPLED_LOWER = "SAMPLED_LOWER"


@dataclass(frozen=True)
class CoveringRadius:
    """Certified bounds on the Euclidean covering radius.

    ``lo2`` and ``hi2`` are exact rational bounds on the squared radius;
    ``interval`` encloses the radius itself with dyadic endpoints.
    """

    lo2: Fraction
    hi2: Fraction
    methods: frozenset
    sampled2: Fraction
    jarnik2: Fraction
    exact2: Optional[Fraction] = None
    deep_hole: Optional[RationalVector] = None
    interval: Interval = field(init=False)

    def __post_init__(self):
        if self.lo2 > self.hi2:
            raise AssertionError("covering radius bounds cross")
        lo = sqrt_bounds(self.lo2, SQRT_BITS)[0]
        hi = sqrt_bounds(self.hi2, SQRT_BITS)[1]
        object.__setattr__(self, "interval", Interval(lo, hi))

    @property
    def lo(self) -> Fraction:
        return self.interval.lo

    @property
    def hi(self) -> Fraction:
        return self.interval.hi

    @property
    def is_exact(self) -> bool:
        return self.exact2 is not None

    def to_json(self) -> dict:
        lo, hi = self.interval.to_floats()
        out = {
            "lo": lo,
            "hi": hi,
            "lo_squared": format_fraction(self.lo2),
            "hi_squared": format_fraction(self.hi2),
            "sampled_lower_squared": format_fraction(self.sampled2),
            "jarnik_upper_squared": format_fraction(self.jarnik2),
            "methods": sorted(m.value for m in self.methods),
        }
        if self.deep_hole is not None:
            out["deep_hole"] = self.deep_hole.to_json()
        return out


def nearest_distance2(L: Lattice, c) -> Fraction:
    """Exact squared Euclidean distance from ``c`` to the nearest point of L."""
    c = RationalVector(c)
    d = L.dim
    guess = L.point([round(x) for x in L.inverse @ c])
    r2 = (guess - c).norm2()
    if r2 == 0:
        return Fraction(0)
    form = [[int(i == j) for j in range(d)] for i in range(d)]
    pts = lattice_points(L, form=form, radius2=r2, center=c)
    return min((p - c).norm2() for p in pts)


def _gauss_reduce(b1: RationalVector, b2: RationalVector) -> tuple:
    while True:
        if b2.norm2() < b1.norm2():
            b1, b2 = b2, b1
        m = round(b1.dot(b2) / b1.norm2())
        if m == 0:
            break
        b2 = b2 - b1 * m
    if b1.dot(b2) < 0:
        b2 = -b2
    return b1, b2


def _circumcenter(a: RationalVector, b: RationalVector) -> RationalVector:
    """Circumcenter of the triangle (0, a, b)."""
    D = 2 * (a[0] * b[1] - a[1] * b[0])
    na, nb = a.norm2(), b.norm2()
    return RationalVector([(b[1] * na - a[1] * nb) / D, (a[0] * nb - b[0] * na) / D])


def _sample_points(L: Lattice, short: list, seed: int, samples: int) -> list:
    d = L.dim
    pts = []
    for mask in range(1, 2 ** d):
        v = RationalVector.zeros(d)
        for i in range(d):
            if mask >> i & 1:
                v = v + short[i] * Fraction(1, 2)
        pts.append(v)
    rng = random.Random(seed)
    B = L.basis
    for _ in range(samples):
        a = [Fraction(rng.randrange(1, 64), 64) for _ in range(d)]
        pts.append(B @ RationalVector(a))
    return pts


def covering_radius(L: Lattice, *, seed: int = 0, samples: int = 64) -> CoveringRadius:
    """Exact in dimension 2; otherwise [sampled deep-hole distance, Jarnik bound]."""
    d = L.dim
    plain = successive_minima(L)
    jarnik2 = d * sum(plain.values) ** 2 / 4
    short = list(plain.witnesses)
    best2, hole = Fraction(-1), None
    for c in _sample_points(L, short, seed, samples):
        r2 = nearest_distance2(L, c)
        if r2 > best2:
            best2, hole = r2, c
    methods = {CoveringMethod.SAMPLED_LOWER, CoveringMethod.JARNIK_UPPER}
    if d == 2:
        b1, b2 = _gauss_reduce(*L.basis.columns())
        # the triangle (0, b1, b2) is non-obtuse, hence a Delaunay cell of L
        cc = _circumcenter(b1, b2)
        exact2 = cc.norm2()
        if not (best2 <= exact2 <= jarnik2):
            raise AssertionError("exact covering radius outside its sampled/Jarnik bracket")
        methods.add(CoveringMethod.EXACT_2D)
        return CoveringRadius(exact2, exact2, frozenset(methods), best2, jarnik2, exact2, cc)
    return CoveringRadius(best2, jarnik2, frozenset(methods), best2, jarnik2, None, hole)


def positive_box_point(L: Lattice, r) -> RationalVector:
    """Lexicographically smallest point of L with every coordinate in [1, 2r + 1].

    A ball of radius ``r >= mu(L)`` around ``(r+1, ..., r+1)`` always holds a
    lattice point, and that ball sits inside the box searched here.
    """
    if isinstance(r, CoveringRadius):
        r = r.hi
    r = to_fraction(r)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    d = L.dim
    pts = lattice_points(L, lower=[1] * d, upper=[2 * r + 1] * d)
    if not pts:
        raise ValueError(f"no lattice point in [1, {format_fraction(2 * r + 1)}]^{d}: r is below the covering radius")
    return min(pts)


@dataclass(frozen=True)
class PlusChain:
    y: RationalVector
    skipped: int
    points: tuple
    multipliers: tuple
    norms: tuple
    targets: tuple  # (index, 2*lambda_i*(r+1)) for the points m_i y + x_i

    def to_json(self) -> dict:
        return {
            "y": self.y.to_json(),
            "skipped_index": self.skipped,
            "points": [p.to_json() for p in self.points],
            "multipliers": list(self.multipliers),
            "sup_norms": [format_fraction(n) for n in self.norms],
            "targets": [{"index": i, "value": format_fraction(v)} for i, v in self.targets],
        }


def construct_plus_chain(L: Lattice, r) -> PlusChain:
    """d independent points of L+ built from a box point and the plain minima.

    With ``y = positive_box_point(L, r)`` and plain minima witnesses ``x_i``,
    drop the first index ``j`` with ``y`` outside the span of the others and
    return ``y`` together with ``ceil(lambda_i) y + x_i`` for ``i != j``.
    """
    if isinstance(r, CoveringRadius):
        r = r.hi
    r = to_fraction(r)
    d = L.dim
    y = positive_box_point(L, r)
    plain = successive_minima(L)
    xs = plain.witnesses
    j = None
    for k in range(d):
        tr = IndependenceTracker(d)
        for i in range(d):
            if i != k:
                tr.add(xs[i])
        if tr.is_independent(y):
            j = k
            break
    assert j is not None, "box point lies in every hyperplane spanned by minima witnesses"
    pts, mult, targets = [y], [1], []
    for i in range(d):
        if i == j:
            continue
        m = math.ceil(plain.values[i])
        p = y * m + xs[i]
        if any(c < 0 for c in p):
            raise AssertionError("chain point left the positive orthant")
        pts.append(p)
        mult.append(m)
        targets.append((i, 2 * plain.values[i] * (r + 1)))
    if det(RationalMatrix.from_columns(pts)) == 0:
        raise AssertionError("chain points are dependent")
    return PlusChain(y, j, tuple(pts), tuple(mult), tuple(p.sup_norm() for p in pts), tuple(targets))


@dataclass(frozen=True)
class Inequality:
    """``lhs <= rhs`` with the right side known to lie in [rhs_lo, rhs_hi]."""

    name: str
    lhs: Fraction
    rhs_lo: Fraction
    rhs_hi: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": format_fraction(self.lhs),
            "rhs_lo": float(self.rhs_lo),
            "rhs_hi": float(self.rhs_hi),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class VerificationRecord:
    inequalities: tuple
    witnesses: dict
    notes: tuple = ()

    @property
    def holds(self) -> bool:
        return all(q.holds for q in self.inequalities)

    def failures(self) -> list:
        return [q for q in self.inequalities if not q.holds]

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "inequalities": [q.to_json() for q in self.inequalities],
            "witnesses": {k: [w.to_json() for w in v] for k, v in sorted(self.witnesses.items())},
            "notes": list(self.notes),
        }


def _mu_inequality(name: str, lhs: Fraction, scale: Fraction, shift: Fraction, cov: CoveringRadius) -> Inequality:
    """lhs <= scale * (mu_hat + shift), decided exactly against mu_hat = sqrt(cov.hi2)."""
    rhs = scale * (cov.interval + shift)
    holds = rational_leq_sqrt(lhs / scale - shift, cov.hi2)
    return Inequality(name, lhs, rhs.lo, rhs.hi, holds)


def no_hyperplane_precondition(X: PositiveBasis) -> bool:
    """No d-1 vectors of X lie in a common coordinate hyperplane."""
    xs = X.vectors
    d = X.dim
    return all(any(xs[j][k] != 0 for j in range(d) if j != i) for i in range(d) for k in range(d))


def verify_small_gap(L: Lattice, X: PositiveBasis, cov: Optional[CoveringRadius] = None) -> VerificationRecord:
    """Check the L+ minima bounds and, for non-orthogonal X, the gap-minimum bound."""
    if X.lattice != L:
        raise ValueError("X is not a basis of L")
    d = L.dim
    cov = cov or covering_radius(L)
    plain = successive_minima(L)
    plus = successive_minima(L, Family.PLUS)
    ineqs = [_mu_inequality("lambda_1(L+) <= 2 mu + 1", plus.values[0], Fraction(2), Fraction(1, 2), cov)]
    for i in range(1, d):
        lam = plain.values[i]
        ineqs.append(_mu_inequality(f"lambda_{i + 1}(L+) <= 2 lambda_{i + 1} (mu + 1)", plus.values[i], 2 * lam,
                                    Fraction(1), cov))
    witnesses = {"lambda": plain.witnesses, "lambda_plus": plus.witnesses}
    notes = []
    if _single_axis_columns(X.matrix):
        notes.append("orthogonal basis: gap bound skipped")
    else:
        if not no_hyperplane_precondition(X):
            raise ValueError("precondition violated: d-1 basis vectors lie in a coordinate hyperplane")
        gaps = successive_minima(L, Family.GAPS, X)
        bound = max(gap_height_bound(X))
        ineqs.append(Inequality(f"lambda_{d}(L+,X) <= gap formula", gaps.values[-1], bound, bound,
                                gaps.values[-1] <= bound))
        witnesses["lambda_gaps"] = gaps.witnesses
    return VerificationRecord(tuple(ineqs), witnesses, tuple(notes))


def verify_gen_small(L: Lattice, Y: Cone, X) -> VerificationRecord:
    """Check the transfer bounds between minima inside cone(Y) and those of M = Y^{-1} L.

    ``X`` is either a positive basis of M or a matrix whose columns form a
    basis of L lying in cone(Y).
    """
    if Y.dim != L.dim:
        raise ValueError("cone and lattice dimensions differ")
    d = L.dim
    M = transport(L, Y)
    if isinstance(X, PositiveBasis):
        if X.lattice != M:
            raise ValueError("X is not a basis of Y^{-1} L")
        XM = X
        XL = Y.generators @ X.matrix
    else:
        XL = X
        XM = PositiveBasis(M, Y.inverse @ XL)
    ny = Y.generators.sup_norm()
    nyi = Y.inverse.sup_norm()
    mplus = successive_minima(M, Family.PLUS)
    ly = successive_minima(L, Family.CONE, cone=Y)
    ineqs = []
    for i in range(d):
        lo = mplus.values[i] / (d * nyi)
        hi = d * ny * mplus.values[i]
        ineqs.append(Inequality(f"lambda_{i + 1}(M+)/(d|Y^-1|) <= lambda_{i + 1}(L(Y))", lo, ly.values[i], ly.values[i],
                                lo <= ly.values[i]))
        ineqs.append(Inequality(f"lambda_{i + 1}(L(Y)) <= d|Y| lambda_{i + 1}(M+)", ly.values[i], hi, hi,
                                ly.values[i] <= hi))
    witnesses = {"lambda_M_plus": mplus.witnesses, "lambda_LY": ly.witnesses}
    notes = []
    if _single_axis_columns(XM.matrix):
        notes.append("X spans the whole cone: gap bound skipped")
    else:
        gl = successive_minima(L, Family.CONE_GAPS, XL, cone=Y)
        gm = successive_minima(M, Family.GAPS, XM)
        hi = d * ny * gm.values[-1]
        ineqs.append(Inequality(f"lambda_{d}(L(Y),X) <= d|Y| lambda_{d}(M+,Y^-1 X)", gl.values[-1], hi, hi,
                                gl.values[-1] <= hi))
        witnesses["lambda_LY_gaps"] = gl.witnesses
        witnesses["lambda_M_gaps"] = gm.witnesses
    return VerificationRecord(tuple(ineqs), witnesses, tuple(notes))
