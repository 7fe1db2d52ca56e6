"""Semigroup membership, gap classification and explicit gap constructions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .enumeration import lattice_points
from .lattice import PositiveBasis
from .linalg import RationalMatrix, RationalVector, det, gcd_vector


class Status(str, enum.Enum):
    SEMIGROUP = "SEMIGROUP"
    GAP = "GAP"
    NOT_IN_L_PLUS = "NOT_IN_L_PLUS"


@dataclass(frozen=True)
class GapCertificate:
    point: RationalVector
    coefficients: tuple
    status: Status
    primitive: bool

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "coefficients": list(self.coefficients),
            "status": self.status.value,
            "primitive": self.primitive,
        }


def classify(X: PositiveBasis, v) -> GapCertificate:
    v = RationalVector(v)
    if len(v) != X.dim:
        raise ValueError("dimension mismatch")
    a = X.coefficients(v)
    if not a.is_integral():
        raise ValueError(f"{v!r} is not a point of the lattice")
    coeffs = a.as_ints()
    if any(x < 0 for x in v):
        status = Status.NOT_IN_L_PLUS
    elif all(c >= 0 for c in coeffs):
        status = Status.SEMIGROUP
    else:
        status = Status.GAP
    return GapCertificate(v, coeffs, status, gcd_vector(coeffs) == 1)


def in_cone(X: PositiveBasis, v) -> bool:
    """Membership in the real cone spanned by X (exact)."""
    v = RationalVector(v)
    if len(v) != X.dim:
        raise ValueError("dimension mismatch")
    return all(c >= 0 for c in X.coefficients(v))


def primitive_decompose(X: PositiveBasis, g) -> tuple:
    """Write a gap as ``m * z`` with ``z`` a primitive gap; returns (z, m)."""
    cert = classify(X, g)
    if cert.status is not Status.GAP:
        raise ValueError(f"{g!r} is not a gap (status {cert.status.value})")
    m = gcd_vector(cert.coefficients)
    z = RationalVector(x / m for x in cert.point)
    return z, m


def _support(v) -> set:
    return {k for k, x in enumerate(v) if x != 0}


def coeff_extend_witness(X: PositiveBasis, b: int) -> RationalVector:
    """A point of L+ whose X-coefficient at one index is exactly ``b``.

    For ``b >= 0`` this is ``b * x_1``. For ``b < 0`` the index is the first
    ``j`` whose support is covered by the other vectors, and the remaining
    coefficients all equal the least positive integer ``A`` making every
    coordinate strictly positive.
    """
    xs = X.vectors
    if b >= 0:
        return xs[0] * b
    if X.is_orthogonal():
        raise ValueError("orthogonal basis: no witness with a negative coefficient exists")
    d = X.dim
    supports = [_support(x) for x in xs]
    j = next(
        j for j in range(d)
        if supports[j] <= set().union(*(supports[i] for i in range(d) if i != j))
    )
    rest = [sum((xs[i][k] for i in range(d) if i != j), Fraction(0)) for k in range(d)]
    A = max(math.floor(-b * xs[j][k] / rest[k]) + 1 for k in supports[j])
    A = max(A, 1)
    z = xs[j] * b
    for i in range(d):
        if i != j:
            z = z + xs[i] * A
    return z


@dataclass(frozen=True)
class ConstructedGap:
    index: int
    multiplier: int
    certificate: GapCertificate
    sup_norm: Fraction
    formula_value: Fraction
    primitive_part: Optional[tuple]  # (z', m) when the constructed vector is not primitive

    def to_json(self) -> dict:
        out = {
            "index": self.index,
            "multiplier": self.multiplier,
            "certificate": self.certificate.to_json(),
            "sup_norm": str(self.sup_norm),
            "formula_value": str(self.formula_value),
        }
        if self.primitive_part is not None:
            out["primitive_part"] = {
                "point": self.primitive_part[0].to_json(),
                "m": self.primitive_part[1],
            }
        return out


def _complement_sums(X: PositiveBasis) -> list:
    """rest[i][k] = sum over j != i of x_jk; raises when some sum vanishes."""
    xs = X.vectors
    d = X.dim
    rest = [[sum((xs[j][k] for j in range(d) if j != i), Fraction(0)) for k in range(d)] for i in range(d)]
    for i in range(d):
        for k in range(d):
            if rest[i][k] == 0:
                raise ValueError(
                    f"precondition violated: the vectors other than x_{i + 1} all vanish in coordinate {k + 1}"
                )
    return rest


def gap_height_bound(X: PositiveBasis) -> list:
    """Per-index value of the explicit sup-norm formula for the constructed gaps."""
    xs = X.vectors
    d = X.dim
    rest = _complement_sums(X)
    out = []
    for i in range(d):
        a = max(math.floor(xs[i][k] / rest[i][k]) for k in range(d)) + 1
        out.append(max(a * rest[i][m] - xs[i][m] for m in range(d)))
    return out


def construct_gap_vectors(X: PositiveBasis) -> list:
    """The d gaps ``a_i * sum_{j != i} x_j - x_i`` with least admissible ``a_i``."""
    xs = X.vectors
    d = X.dim
    rest = _complement_sums(X)
    formula = gap_height_bound(X)
    out = []
    for i in range(d):
        a = max(math.floor(xs[i][k] / rest[i][k]) for k in range(d)) + 1
        z = RationalVector(a * rest[i][k] - xs[i][k] for k in range(d))
        cert = classify(X, z)
        if cert.status is not Status.GAP:
            raise AssertionError(f"constructed vector {z!r} is not a gap")
        prim = None
        if not cert.primitive:
            prim = primitive_decompose(X, z)
        out.append(ConstructedGap(i, a, cert, z.sup_norm(), formula[i], prim))
    if det(RationalMatrix.from_columns([g.certificate.point for g in out])) == 0:
        raise AssertionError("constructed gaps are linearly dependent")
    return out


def list_gaps(X: PositiveBasis, t, primitive_only: bool = False) -> list:
    """Certificates of all gaps with sup-norm at most t, in lexicographic order."""
    d = X.dim
    out = []
    for v in sorted(lattice_points(X.lattice, lower=[0] * d, upper=[t] * d)):
        cert = classify(X, v)
        if cert.status is Status.GAP and (cert.primitive or not primitive_only):
            out.append(cert)
    return out
