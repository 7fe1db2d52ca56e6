"""Solid angles of simplicial cones and the gap-counting asymptotics."""

from __future__ import annotations

import enum
from contextlib import contextmanager
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from mpmath import iv

from .enumeration import count_in_cone, count_positive, count_semigroup
from .lattice import Cone, Lattice, PositiveBasis, transport
from .linalg import RationalMatrix, det, to_fraction

Z99 = 2.5758293035489004  # two-sided 99% normal quantile


class AngleMethod(str, enum.Enum):
    EXACT_2D = "EXACT_2D"
    SPHERICAL_3D = "SPHERICAL_3D"
    MONTE_CARLO = "MONTE_CARLO"


@dataclass(frozen=True)
class SolidAngle:
    lo: float
    hi: float
    method: AngleMethod
    samples: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if not (0 <= self.lo <= self.hi <= 1):
            raise ValueError(f"bad solid-angle interval [{self.lo}, {self.hi}]")

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> dict:
        out = {"lo": self.lo, "hi": self.hi, "method": self.method.value}
        if self.samples is not None:
            out["samples"] = self.samples
            out["seed"] = self.seed
        return out


@contextmanager
def ivprec(prec: int):
    """Temporarily set the working precision of mpmath's interval context."""
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def _iv(x: Fraction):
    x = to_fraction(x)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _outward(x) -> tuple:
    lo, hi = float(x.a), float(x.b)
    return math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf)


def _clamp(lo: float, hi: float, cap: float) -> tuple:
    return max(0.0, min(lo, cap)), min(max(hi, 0.0), cap)


def unit_ball_volume(d: int, prec: int = 128):
    """Volume of the unit ball in R^d as an mpmath interval."""
    with ivprec(prec):
        if d % 2 == 0:
            return iv.pi ** (d // 2) / math.factorial(d // 2)
        k = (d - 1) // 2
        double_fact = math.prod(range(d, 0, -2))
        return iv.mpf(2 ** (k + 1)) * iv.pi ** k / double_fact


def _inside_orthant(Y: RationalMatrix) -> bool:
    return all(x >= 0 for row in Y.tolist() for x in row)


def solid_angle(C: Cone, method=None, *, samples: int = 200_000, seed: int = 0, prec: int = 128) -> SolidAngle:
    """Fraction of the unit ball cut out by the cone, as a certified interval.

    EXACT_2D and SPHERICAL_3D use interval arithmetic on exact dot products;
    MONTE_CARLO reports a 99% normal half-width around the hit fraction of
    seeded Gaussian directions.
    """
    Y = C.generators
    d = C.dim
    if method is None:
        method = {2: AngleMethod.EXACT_2D, 3: AngleMethod.SPHERICAL_3D}.get(d, AngleMethod.MONTE_CARLO)
    method = AngleMethod(method)
    cap = 1.0 / 2 ** d if _inside_orthant(Y) else 1.0
    ys = Y.columns()
    if method is AngleMethod.EXACT_2D:
        if d != 2:
            raise ValueError("EXACT_2D needs a planar cone")
        cross = abs(det(Y))
        dot = ys[0].dot(ys[1])
        with ivprec(prec):
            nu = iv.atan2(_iv(cross), _iv(dot)) / (2 * iv.pi)
            lo, hi = _outward(nu)
        return SolidAngle(*_clamp(lo, hi, cap), method)
    if method is AngleMethod.SPHERICAL_3D:
        if d != 3:
            raise ValueError("SPHERICAL_3D needs a cone in R^3")
        a, b, c = ys
        with ivprec(prec):
            na, nb, nc = (iv.sqrt(_iv(v.norm2())) for v in (a, b, c))
            den = na * nb * nc + _iv(a.dot(b)) * nc + _iv(a.dot(c)) * nb + _iv(b.dot(c)) * na
            # spherical excess of the triangle cut out on the unit sphere
            excess = 2 * iv.atan2(_iv(abs(det(Y))), den)
            nu = excess / (4 * iv.pi)
            lo, hi = _outward(nu)
        return SolidAngle(*_clamp(lo, hi, cap), method)
    rng = np.random.Generator(np.random.PCG64(seed))
    Yinv = np.array([[float(x) for x in row] for row in C.inverse.tolist()])
    hits = 0
    chunk = 100_000
    left = samples
    while left > 0:
        n = min(chunk, left)
        g = rng.standard_normal((n, d))
        coeff = g @ Yinv.T
        hits += int(np.count_nonzero(np.all(coeff >= 0, axis=1)))
        left -= n
    p = hits / samples
    half = Z99 * math.sqrt(max(p * (1 - p), 0.25 / samples) / samples)
    return SolidAngle(*_clamp(p - half, p + half, cap), method, samples, seed)


@dataclass
class CountingReport:
    dim: int
    det_L: Fraction
    nu: SolidAngle
    rows: list = field(default_factory=list)  # (t, N_Lplus, N_semigroup, N_gaps)
    predicted: tuple = (0.0, 0.0)
    predicted_whole: tuple = (0.0, 0.0)
    predicted_semigroup: tuple = (0.0, 0.0)
    nu_outer: Optional[SolidAngle] = None
    outer_label: str = "N_Lplus"

    @property
    def partition_ok(self) -> bool:
        return all(g == a - s for _, a, s, g in self.rows)

    def ratios(self, column: int = 3) -> list:
        d = self.dim
        return [r[column] / float(r[0]) ** d for r in self.rows]

    @property
    def raw_coefficient(self) -> float:
        return self.ratios()[-1]

    def fitted_coefficient(self, column: int = 3) -> float:
        d = self.dim
        ts = np.array([float(r[0]) for r in self.rows])
        N = np.array([float(r[column]) for r in self.rows])
        if len(ts) < 2:
            return float(N[0] / ts[0] ** d)
        A = np.column_stack([ts ** d, ts ** (d - 1)])
        coef, *_ = np.linalg.lstsq(A, N, rcond=None)
        return float(coef[0])

    def relative_error(self) -> float:
        """|raw ratio at the largest t - predicted constant| / predicted constant."""
        lo, hi = self.predicted
        x = self.raw_coefficient
        ref = (lo + hi) / 2
        if ref == 0:
            return math.inf if x != 0 else 0.0
        return abs(x - ref) / abs(ref)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,N_Lplus,N_semigroup,N_gaps,gap_ratio,predicted_lo,predicted_hi\n")
        lo, hi = self.predicted
        for (t, a, s, g), ratio in zip(self.rows, self.ratios()):
            buf.write(f"{_fmt_t(t)},{a},{s},{g},{ratio:.12g},{lo:.12g},{hi:.12g}\n")
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "det_L": str(self.det_L),
            "nu": self.nu.to_json(),
            "nu_outer": self.nu_outer.to_json() if self.nu_outer else None,
            "rows": [
                {"t": _fmt_t(t), self.outer_label: a, "N_semigroup": s, "N_gaps": g}
                for t, a, s, g in self.rows
            ],
            "gap_ratios": self.ratios(),
            "raw_coefficient": self.raw_coefficient,
            "fitted_coefficient": self.fitted_coefficient(),
            "predicted": list(self.predicted),
            "predicted_outer": list(self.predicted_whole),
            "predicted_semigroup": list(self.predicted_semigroup),
            "partition_ok": self.partition_ok,
        }


def _fmt_t(t) -> str:
    t = to_fraction(t)
    return str(t.numerator) if t.denominator == 1 else f"{t.numerator}/{t.denominator}"


def _float_interval(x) -> tuple:
    return _outward(x)


def _count_row(args):
    kind, payload, t = args
    if kind == "orthant":
        L, X = payload
        a = count_positive(L, t)
    else:
        L, X, Y = payload
        a = count_in_cone(L, Y, t)
    s = count_semigroup(X, t)
    return (t, a, s, a - s)


def _run_rows(kind, payload, t_grid, threads: int) -> list:
    jobs = [(kind, payload, to_fraction(t)) for t in t_grid]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(_count_row, jobs))
    return [_count_row(j) for j in jobs]


def _check_grid(t_grid: Sequence) -> None:
    ts = [to_fraction(t) for t in t_grid]
    if not ts or any(t <= 0 for t in ts) or any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be a nonempty increasing list of positive radii")


def verify_gap_asymptotics(L: Lattice, X: PositiveBasis, t_grid: Sequence, *, angle: Optional[SolidAngle] = None,
                           threads: int = 1, prec: int = 128, seed: int = 0) -> CountingReport:
    """Exact N(L+), N(S(X)), N(G(X)) on the grid next to the predicted leading constants."""
    _check_grid(t_grid)
    d = L.dim
    nu = angle or solid_angle(Cone(X.matrix), prec=prec, seed=seed)
    with ivprec(prec):
        w = unit_ball_volume(d, prec)
        detL = _iv(L.det_abs)
        nu_iv = iv.mpf([nu.lo, nu.hi])
        gaps = w * (1 - nu_iv * 2 ** d) / (2 ** d * detL)
        whole = w / (2 ** d * detL)
        semi = w * nu_iv / detL
        pred = _clamp(*_float_interval(gaps), math.inf)
        report = CountingReport(
            d, L.det_abs, nu,
            predicted=pred,
            predicted_whole=_float_interval(whole),
            predicted_semigroup=_float_interval(semi),
        )
    report.rows = _run_rows("orthant", (L, X), t_grid, threads)
    return report


def verify_general_cone_count(L: Lattice, Y: Cone, X: PositiveBasis | RationalMatrix, t_grid: Sequence, *,
                              threads: int = 1, prec: int = 128, seed: int = 0) -> CountingReport:
    """Gap counts of S(X) inside L ∩ cone(Y) for a basis X of L lying in that cone."""
    _check_grid(t_grid)
    Xm = X.matrix if isinstance(X, PositiveBasis) else X
    d = L.dim
    if not all(Y.contains(x) for x in Xm.columns()):
        raise ValueError("X is not contained in the cone spanned by Y")
    M = transport(L, Y)
    PositiveBasis(M, Y.inverse @ Xm)  # validates that X is a basis of L
    nu_y = solid_angle(Y, prec=prec, seed=seed)
    nu_x = solid_angle(Cone(Xm), prec=prec, seed=seed + 1)
    with ivprec(prec):
        w = unit_ball_volume(d, prec)
        detL = _iv(L.det_abs)
        gaps = w * (iv.mpf([nu_y.lo, nu_y.hi]) - iv.mpf([nu_x.lo, nu_x.hi])) / detL
        report = CountingReport(
            d, L.det_abs, nu_x,
            predicted=_clamp(*_float_interval(gaps), math.inf),
            predicted_whole=_float_interval(w * iv.mpf([nu_y.lo, nu_y.hi]) / detL),
            predicted_semigroup=_float_interval(w * iv.mpf([nu_x.lo, nu_x.hi]) / detL),
            nu_outer=nu_y,
            outer_label="N_LY",
        )
    report.rows = _run_rows("cone", (L, Xm, Y), t_grid, threads)
    return report
