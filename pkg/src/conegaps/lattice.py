"""Full-rank lattices, positive bases and simplicial cones."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .linalg import (
    RationalMatrix,
    RationalVector,
    det,
    extend_primitive,
    gcd_vector,
    invert,
    is_unimodular,
    rational_hnf,
)


class NotPositiveError(ValueError):
    """A proposed positive basis has a negative coordinate."""


@dataclass(frozen=True, eq=False)
class Lattice:
    """A full-rank lattice ``basis @ Z^d`` (columns are basis vectors)."""

    basis: RationalMatrix
    inverse: RationalMatrix = field(init=False, repr=False)
    det_abs: Fraction = field(init=False)

    def __post_init__(self):
        if not self.basis.is_square:
            raise ValueError("lattice basis must be square")
        if self.basis.rows < 2:
            raise ValueError("lattice dimension must be at least 2")
        D = det(self.basis)
        if D == 0:
            raise ValueError("lattice basis is singular")
        object.__setattr__(self, "det_abs", abs(D))
        object.__setattr__(self, "inverse", invert(self.basis))

    @classmethod
    def from_columns(cls, columns) -> "Lattice":
        return cls(RationalMatrix.from_columns([RationalVector(c) for c in columns]))

    @classmethod
    def integer_lattice(cls, d: int) -> "Lattice":
        return cls(RationalMatrix.identity(d))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def hnf(self) -> RationalMatrix:
        return rational_hnf(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.dim == other.dim and self.hnf() == other.hnf()

    def __hash__(self) -> int:
        return hash(self.hnf())

    def point(self, coefficients) -> RationalVector:
        return self.basis @ RationalVector(coefficients)

    def scaled(self, c) -> "Lattice":
        return Lattice(self.basis * c)

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, obj) -> "Lattice":
        L = cls(RationalMatrix.from_json(obj["basis"]))
        if "dim" in obj and int(obj["dim"]) != L.dim:
            raise ValueError("'dim' disagrees with the basis")
        return L


def member(L: Lattice, v) -> Optional[tuple]:
    """Integer coefficients of ``v`` in the basis of ``L``, or None if v is not in L."""
    v = RationalVector(v)
    if len(v) != L.dim:
        raise ValueError(f"dimension mismatch: lattice {L.dim}, vector {len(v)}")
    a = L.inverse @ v
    if not a.is_integral():
        return None
    return a.as_ints()


def is_primitive(L: Lattice, v) -> bool:
    a = member(L, v)
    if a is None:
        raise ValueError(f"{v!r} is not a point of the lattice")
    return gcd_vector(a) == 1


@dataclass(frozen=True, eq=False)
class Cone:
    """The simplicial cone spanned by the columns of ``generators``."""

    generators: RationalMatrix
    inverse: RationalMatrix = field(init=False, repr=False)

    def __post_init__(self):
        if not self.generators.is_square or det(self.generators) == 0:
            raise ValueError("cone generators must be a nonsingular square matrix")
        object.__setattr__(self, "inverse", invert(self.generators))

    @classmethod
    def orthant(cls, d: int) -> "Cone":
        return cls(RationalMatrix.identity(d))

    @classmethod
    def from_columns(cls, columns) -> "Cone":
        return cls(RationalMatrix.from_columns([RationalVector(c) for c in columns]))

    @property
    def dim(self) -> int:
        return self.generators.rows

    def contains(self, v) -> bool:
        return all(c >= 0 for c in self.inverse @ RationalVector(v))

    def inverse_cone(self) -> "Cone":
        return Cone(self.inverse)

    def to_json(self) -> dict:
        return {"generators": self.generators.to_json()}

    @classmethod
    def from_json(cls, obj) -> "Cone":
        return cls(RationalMatrix.from_json(obj["generators"]))


def transport(L: Lattice, C: Cone) -> Lattice:
    """The lattice ``Y^{-1} L`` mapping ``L ∩ cone(Y)`` onto its positive part."""
    if C.dim != L.dim:
        raise ValueError("cone and lattice dimensions differ")
    return Lattice(C.inverse @ L.basis)


@dataclass(frozen=True, eq=False)
class PositiveBasis:
    """A basis of ``lattice`` with all coordinates nonnegative.

    ``matrix`` holds the basis vectors as columns; ``change`` is the
    unimodular matrix with ``lattice.basis @ change == matrix``.
    """

    lattice: Lattice
    matrix: RationalMatrix
    change: RationalMatrix = field(init=False, repr=False)
    inverse_matrix: RationalMatrix = field(init=False, repr=False)

    def __post_init__(self):
        if self.matrix.shape != self.lattice.basis.shape:
            raise ValueError("basis shape does not match the lattice")
        if any(x < 0 for row in self.matrix.tolist() for x in row):
            raise NotPositiveError("basis has a negative coordinate")
        change = self.lattice.inverse @ self.matrix
        if not is_unimodular(change):
            raise ValueError("vectors do not form a basis of the lattice")
        object.__setattr__(self, "change", change)
        object.__setattr__(self, "inverse_matrix", invert(self.matrix))

    @classmethod
    def from_columns(cls, lattice: Lattice, columns) -> "PositiveBasis":
        return cls(lattice, RationalMatrix.from_columns([RationalVector(c) for c in columns]))

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def vectors(self) -> list:
        return self.matrix.columns()

    def is_strictly_positive(self) -> bool:
        return all(x > 0 for row in self.matrix.tolist() for x in row)

    def is_orthogonal(self) -> bool:
        vs = self.vectors
        return all(vs[i].dot(vs[j]) == 0 for i in range(len(vs)) for j in range(i + 1, len(vs)))

    def coefficients(self, v) -> RationalVector:
        return self.inverse_matrix @ RationalVector(v)

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix.to_json(),
            "change_of_basis": self.change.to_json(),
            "det_change": int(det(self.change)),
        }


def _coefficient_shell(d: int, R: int):
    """Integer vectors with sup-norm exactly R, in lexicographic order."""
    for a in itertools.product(range(-R, R + 1), repeat=d):
        if max(abs(x) for x in a) == R:
            yield a


def _first_positive_radius(L: Lattice, limit: int = 10_000) -> int:
    for R in range(1, limit):
        for a in _coefficient_shell(L.dim, R):
            if all(x > 0 for x in L.point(a)):
                return R
    raise RuntimeError("no strictly positive lattice point found")  # pragma: no cover


def _positive_candidates(L: Lattice, seed: int, extra_shells: int = 2) -> list:
    R0 = _first_positive_radius(L)
    seen = set()
    pool = []
    for R in range(1, R0 + extra_shells + 1):
        for a in _coefficient_shell(L.dim, R):
            if all(x > 0 for x in L.point(a)):
                g = gcd_vector(a)
                p = tuple(x // g for x in a)
                if p not in seen:
                    seen.add(p)
                    pool.append(p)
    return pool


def _push_positive(L: Lattice, A: RationalMatrix) -> RationalMatrix:
    """Add multiples of the first basis vector to the others until all are > 0."""
    X = L.basis @ A
    x1 = X.col(0)
    d = L.dim
    E = [[int(i == j) for j in range(d)] for i in range(d)]
    for i in range(1, d):
        xi = X.col(i)
        M = max(math.ceil((1 - xi[k]) / x1[k]) for k in range(d))
        E[0][i] = max(M, 0)
    return A @ RationalMatrix(E)


def generate_positive_basis(L: Lattice, seed: int = 0, first=None) -> PositiveBasis:
    """A basis of ``L`` inside the open positive orthant.

    A strictly positive primitive point ``x1`` is chosen (seeded choice among
    the positive points found by iterative deepening over coefficient cubes,
    or ``first`` if given), extended to a basis by a unimodular completion, and
    every other vector ``x_i`` is replaced by ``x_i + M_i x1`` with the least
    ``M_i >= 0`` making all of its coordinates at least 1.
    """
    if first is not None:
        a = member(L, first)
        if a is None:
            raise ValueError("forced first vector is not in the lattice")
        if not all(x > 0 for x in RationalVector(first)):
            raise ValueError("forced first vector is not strictly positive")
        g = gcd_vector(a)
        a = tuple(x // g for x in a)
    else:
        pool = _positive_candidates(L, seed)
        a = random.Random(seed).choice(pool)
    A = _push_positive(L, extend_primitive(a))
    return PositiveBasis(L, L.basis @ A)


def random_lattice(d: int, rng: random.Random, entry_bound: int = 3) -> Lattice:
    """Small random integer lattice (used by tests and demos)."""
    while True:
        rows = [[rng.randint(-entry_bound, entry_bound) for _ in range(d)] for _ in range(d)]
        M = RationalMatrix(rows)
        if det(M) != 0:
            return Lattice(M)


def positive_bases(L: Lattice, count: int, seed: int = 0) -> list:
    """``count`` distinct positive bases of ``L``, from seeded distinct first vectors."""
    if count < 1:
        raise ValueError("count must be positive")
    extra = 2
    while True:
        pool = _positive_candidates(L, seed, extra_shells=extra)
        if len(pool) >= count:
            break
        extra += 1
    picks = random.Random(seed).sample(pool, count)
    return [generate_positive_basis(L, first=L.point(a)) for a in picks]
