"""Exact integer/rational vectors and matrices.

Everything here works over :class:`fractions.Fraction`, so equality is
structural and no tolerance is ever needed. Matrices store their rows as
tuples; lattice bases use the *column* convention throughout the package
(the columns of a basis matrix are the basis vectors).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Number = Union[int, Fraction]


def to_fraction(x) -> Fraction:
    """Convert ints, Fractions, "p/q" strings or decimal strings exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # floats are accepted only when they are exactly representable
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class RationalVector:
    """Immutable vector of exact rationals."""

    __slots__ = ("_e",)

    def __init__(self, entries: Iterable):
        e = tuple(to_fraction(x) for x in entries)
        if not e:
            raise ValueError("a vector needs at least one entry")
        self._e = e

    @classmethod
    def zeros(cls, n: int) -> "RationalVector":
        return cls([0] * n)

    @property
    def dim(self) -> int:
        return len(self._e)

    def __len__(self) -> int:
        return len(self._e)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._e)

    def __getitem__(self, i):
        return self._e[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalVector):
            return self._e == other._e
        if isinstance(other, (tuple, list)):
            return len(other) == len(self._e) and all(a == b for a, b in zip(self._e, other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._e)

    def __lt__(self, other: "RationalVector") -> bool:
        return self._e < other._e

    def __repr__(self) -> str:
        return "RationalVector([" + ", ".join(format_fraction(x) for x in self._e) + "])"

    def _check(self, other: "RationalVector") -> None:
        if len(other) != len(self._e):
            raise ValueError(f"dimension mismatch: {len(self._e)} vs {len(other)}")

    def __add__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(a + b for a, b in zip(self._e, other))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(a - b for a, b in zip(self._e, other))

    def __neg__(self) -> "RationalVector":
        return RationalVector(-a for a in self._e)

    def __mul__(self, c) -> "RationalVector":
        c = to_fraction(c)
        return RationalVector(c * a for a in self._e)

    __rmul__ = __mul__

    def dot(self, other: "RationalVector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self._e, other)), Fraction(0))

    def norm2(self) -> Fraction:
        """Squared Euclidean norm (exact)."""
        return self.dot(self)

    def sup_norm(self) -> Fraction:
        return max(abs(a) for a in self._e)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self._e)

    def is_zero(self) -> bool:
        return not any(self._e)

    def as_ints(self) -> tuple:
        if not self.is_integral():
            raise ValueError("vector has non-integral entries")
        return tuple(a.numerator for a in self._e)

    def to_json(self) -> list:
        return [format_fraction(x) for x in self._e]


class RationalMatrix:
    """Immutable matrix of exact rationals, stored row-major."""

    __slots__ = ("_r", "rows", "cols")

    def __init__(self, rows: Iterable[Iterable]):
        r = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if not r or not r[0]:
            raise ValueError("a matrix needs at least one row and column")
        width = len(r[0])
        if any(len(row) != width for row in r):
            raise ValueError("ragged matrix rows")
        self._r = r
        self.rows = len(r)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Iterable]) -> "RationalMatrix":
        cols = [tuple(c) for c in columns]
        return cls(list(zip(*cols)))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "RationalMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._r[i][j]

    def row(self, i: int) -> RationalVector:
        return RationalVector(self._r[i])

    def col(self, j: int) -> RationalVector:
        return RationalVector(row[j] for row in self._r)

    def columns(self) -> list:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list:
        return [list(row) for row in self._r]

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self._r)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._r == other._r

    def __hash__(self) -> int:
        return hash(self._r)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_fraction(x) for x in row) + "]" for row in self._r)
        return f"RationalMatrix([{body}])"

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._r, other._r)])

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._r, other._r)])

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix([[-a for a in r] for r in self._r])

    def __mul__(self, c) -> "RationalMatrix":
        c = to_fraction(c)
        return RationalMatrix([[c * a for a in r] for r in self._r])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, RationalVector):
            if len(other) != self.cols:
                raise ValueError(f"dimension mismatch: {self.shape} @ {len(other)}")
            v = tuple(other)
            return RationalVector(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self._r)
        if isinstance(other, RationalMatrix):
            if other.rows != self.cols:
                raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
            ocols = list(zip(*other._r))
            return RationalMatrix(
                [[sum((a * b for a, b in zip(row, c)), Fraction(0)) for c in ocols] for row in self._r]
            )
        return NotImplemented

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self._r for x in row)

    def as_int_rows(self) -> list:
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return [[x.numerator for x in row] for row in self._r]

    def sup_norm(self) -> Fraction:
        """Largest absolute entry (the matrix viewed as a vector)."""
        return max(abs(x) for row in self._r for x in row)

    def denominator_lcm(self) -> int:
        out = 1
        for row in self._r:
            for x in row:
                out = out * x.denominator // math.gcd(out, x.denominator)
        return out

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[format_fraction(x) for x in row] for row in self._r],
        }

    @classmethod
    def from_json(cls, obj) -> "RationalMatrix":
        if isinstance(obj, list):
            return cls(obj)
        entries = obj["entries"]
        m = cls(entries)
        if m.rows != int(obj.get("rows", m.rows)) or m.cols != int(obj.get("cols", m.cols)):
            raise ValueError("matrix 'rows'/'cols' disagree with 'entries'")
        return m


def _bareiss(rows: list) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(M: RationalMatrix) -> Fraction:
    if not M.is_square:
        raise ValueError(f"determinant of a non-square {M.rows}x{M.cols} matrix")
    scale = Fraction(1)
    int_rows = []
    for row in M.tolist():
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        int_rows.append([(x * den).numerator for x in row])
        scale *= den
    return Fraction(_bareiss(int_rows)) / scale


def invert(M: RationalMatrix) -> RationalMatrix:
    """Exact inverse by Gauss-Jordan elimination."""
    if not M.is_square:
        raise ValueError("cannot invert a non-square matrix")
    n = M.rows
    a = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M.tolist())]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        a[k] = [x / p for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return RationalMatrix([row[n:] for row in a])


def solve(M: RationalMatrix, v: RationalVector) -> RationalVector:
    return invert(M) @ v


def rank(vectors: Sequence[Sequence]) -> int:
    """Rank of a list of vectors (exact elimination)."""
    rows = [[to_fraction(x) for x in v] for v in vectors]
    r = 0
    if not rows:
        return 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


class IndependenceTracker:
    """Incremental linear-independence test over the rationals."""

    def __init__(self, dim: int):
        self.dim = dim
        self._pivots: dict = {}  # pivot column -> reduced row

    def __len__(self) -> int:
        return len(self._pivots)

    def _reduce(self, v) -> list:
        w = [to_fraction(x) for x in v]
        for c, row in self._pivots.items():
            if w[c] != 0:
                f = w[c] / row[c]
                w = [x - f * y for x, y in zip(w, row)]
        return w

    def is_independent(self, v) -> bool:
        return any(self._reduce(v))

    def add(self, v) -> bool:
        """Add ``v`` if it is independent of what is stored; report whether it was."""
        w = self._reduce(v)
        c = next((i for i, x in enumerate(w) if x != 0), None)
        if c is None:
            return False
        for k, row in list(self._pivots.items()):
            if row[c] != 0:
                f = row[c] / w[c]
                self._pivots[k] = [x - f * y for x, y in zip(row, w)]
        self._pivots[c] = w
        return True


def xgcd(a: int, b: int) -> tuple:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _hnf_int(A: list) -> tuple:
    """Column-style HNF of an integer m x n matrix of full row rank.

    Returns (H, U) as integer row lists with A U = H, H lower triangular in its
    first m columns (the rest zero), positive pivots, and every entry left of
    a pivot reduced into [0, pivot).
    """
    m = len(A)
    n = len(A[0])
    H = [list(r) for r in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(j, k, a, b, c, d):
        # (col_j, col_k) <- (a col_j + c col_k, b col_j + d col_k)
        for M in (H, U):
            for row in M:
                x, y = row[j], row[k]
                row[j] = a * x + c * y
                row[k] = b * x + d * y

    for i in range(m):
        k = i
        if k >= n:
            raise ValueError("matrix does not have full row rank")
        for j in range(k + 1, n):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][k]
            g, s, t = xgcd(a, b)
            col_op(k, j, s, -b // g, t, a // g)
        if H[i][k] == 0:
            raise ValueError("matrix does not have full row rank")
        if H[i][k] < 0:
            for M in (H, U):
                for row in M:
                    row[k] = -row[k]
        p = H[i][k]
        for j in range(k):
            q = H[i][j] // p
            if q:
                for M in (H, U):
                    for row in M:
                        row[j] -= q * row[k]
    return H, U


def hnf(M: RationalMatrix) -> tuple:
    """Hermite normal form under unimodular column operations.

    ``M`` must be an integer matrix of full row rank. Returns ``(H, U)`` with
    ``M @ U == H`` and ``U`` unimodular; ``H`` is lower triangular with
    positive pivots and the entries left of each pivot lie in ``[0, pivot)``.
    """
    H, U = _hnf_int(M.as_int_rows())
    return RationalMatrix(H), RationalMatrix(U)


def rational_hnf(M: RationalMatrix) -> RationalMatrix:
    """Canonical HNF of a rational full-row-rank matrix (scale, reduce, unscale)."""
    D = M.denominator_lcm()
    H, _ = _hnf_int((M * D).as_int_rows())
    return RationalMatrix(H) * Fraction(1, D)


def gcd_vector(a) -> int:
    g = 0
    for x in a:
        x = to_fraction(x)
        if x.denominator != 1:
            raise ValueError("gcd of a non-integral vector")
        g = math.gcd(g, x.numerator)
    return g


def extend_primitive(a) -> RationalMatrix:
    """Unimodular integer matrix whose first column is the primitive vector ``a``."""
    a = RationalVector(a)
    g = gcd_vector(a)
    if g != 1:
        raise ValueError(f"vector {a!r} is not primitive (gcd {g})")
    _, U = hnf(RationalMatrix([list(a)]))
    A = invert(U).T
    assert A.col(0) == a and abs(det(A)) == 1
    return A


def is_unimodular(M: RationalMatrix) -> bool:
    return M.is_square and M.is_integral() and abs(det(M)) == 1
