"""Dense univariate polynomials over Q and certified real-root isolation.

A polynomial is a tuple of Fractions, lowest degree first, with no trailing
zeros (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Sequence

from ..interval import Interval
from ..linalg import RationalMatrix, to_fraction


def normalize(p: Sequence) -> tuple:
    q = [to_fraction(c) for c in p]
    while q and q[-1] == 0:
        q.pop()
    return tuple(q)


def degree(p: tuple) -> int:
    return len(p) - 1


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(x(?:\s*\^\s*(\d+))?)?")


def parse_poly(text: str) -> tuple:
    """Parse ``"x^3-3x-1"``-style input (integer or rational coefficients)."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial {text!r} near position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            e = int(m.group(4)) if m.group(4) else 1
        else:
            e = 0
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"cannot parse polynomial {text!r} near position {pos}")
    n = max(coeffs)
    return normalize([coeffs.get(i, 0) for i in range(n + 1)])


def format_poly(p: tuple) -> str:
    if not p:
        return "0"
    parts = []
    for e in range(len(p) - 1, -1, -1):
        c = p[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
        coef = str(a) if (a != 1 or e == 0) else ""
        parts.append((sign, coef + mono))
    out = "".join(f"{s}{t}" for s, t in parts)
    return out[1:] if out.startswith("+") else out


def add(p, q) -> tuple:
    n = max(len(p), len(q))
    return normalize([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p, q) -> tuple:
    return add(p, scale(q, -1))


def scale(p, c) -> tuple:
    c = to_fraction(c)
    return normalize([c * x for x in p])


def mul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return normalize(out)


def divmod_poly(p, q) -> tuple:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quo = [Fraction(0)] * max(len(p) - dq, 1)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        c = r[-1] / lead
        quo[k] = c
        for i, b in enumerate(q):
            r[i + k] -= c * b
        r = list(normalize(r))
    return normalize(quo), normalize(r)


def rem(p, q) -> tuple:
    return divmod_poly(p, q)[1]


def monic(p) -> tuple:
    return scale(p, 1 / p[-1]) if p else ()


def gcd(p, q) -> tuple:
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def derivative(p) -> tuple:
    return normalize([i * p[i] for i in range(1, len(p))])


def evaluate(p, x) -> Fraction:
    x = to_fraction(x)
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def evaluate_interval(p, X: Interval) -> Interval:
    """Enclosure of p over X (mean-value form around the midpoint when X is wide)."""
    if X.lo == X.hi or len(p) <= 1:
        return Interval.point(evaluate(p, X.lo))
    m = X.mid
    horner = Interval.point(0)
    for c in reversed(p):
        horner = horner * X + c
    dp = derivative(p)
    dX = Interval.point(0)
    for c in reversed(dp):
        dX = dX * X + c
    centered = evaluate(p, m) + dX * (X - m)
    return Interval(max(horner.lo, centered.lo), min(horner.hi, centered.hi))


def squarefree_degree(p) -> int:
    """Degree of the squarefree part (the number of distinct complex roots)."""
    return degree(p) - degree(gcd(p, derivative(p)))


def primitive_integer(p) -> tuple:
    """Scale to coprime integer coefficients with positive leading coefficient."""
    if not p:
        raise ValueError("zero polynomial")
    den = math.lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = math.gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return tuple(x // g for x in ints)


def is_irreducible(p) -> bool:
    """Irreducibility over Q (exact factorisation in sympy)."""
    import sympy

    x = sympy.Symbol("x")
    ints = primitive_integer(p)
    expr = sum(c * x ** i for i, c in enumerate(ints))
    _, factors = sympy.factor_list(expr, x)
    return len(factors) == 1 and factors[0][1] == 1


def sturm_sequence(p) -> list:
    seq = [p, derivative(p)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(scale(r, -1))
    return seq


def _sign_changes(seq: list, x: Fraction) -> int:
    return _changes([_sgn(evaluate(q, x)) for q in seq])


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def count_real_roots(p, a=None, b=None) -> int:
    """Distinct real roots in (a, b]; the whole line when a and b are omitted."""
    seq = sturm_sequence(p)
    if a is None:
        return _changes(_limit_signs(seq, -1)) - _changes(_limit_signs(seq, 1))
    return _sign_changes(seq, to_fraction(a)) - _sign_changes(seq, to_fraction(b))


def _changes(signs: list) -> int:
    signs = [x for x in signs if x]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _limit_signs(seq: list, direction: int) -> list:
    return [(-1 if direction < 0 and degree(q) % 2 else 1) * _sgn(q[-1]) for q in seq]


def cauchy_bound(p) -> Fraction:
    lead = abs(p[-1])
    return 1 + max(abs(c) / lead for c in p[:-1]) if len(p) > 1 else Fraction(1)


def _nonroot_near(p, m: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    """A split point in (lo, hi) close to m where p does not vanish."""
    if evaluate(p, m) != 0:
        return m
    step = (hi - lo) / 7
    k = 1
    while True:
        for c in (m + step / k, m - step / k):
            if lo < c < hi and evaluate(p, c) != 0:
                return c
        k += 1


def isolate_real_roots(p) -> list:
    """Disjoint intervals (a, b), a < b, each holding exactly one real root of squarefree p.

    The endpoints are never roots. Intervals come sorted left to right.
    """
    if squarefree_degree(p) != degree(p):
        raise ValueError("root isolation needs a squarefree polynomial")
    seq = sturm_sequence(p)
    B = cauchy_bound(p)
    lo, hi = -B, B
    if evaluate(p, lo) == 0 or evaluate(p, hi) == 0:
        lo, hi = lo - 1, hi + 1
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _sign_changes(seq, a) - _sign_changes(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = _nonroot_near(p, (a + b) / 2, a, b)
        stack.append((m, b))
        stack.append((a, m))
    return sorted(out)


def refine_root(p, a: Fraction, b: Fraction, width: Fraction) -> tuple:
    """Bisect the isolating interval (a, b) until b - a <= width."""
    sa = _sgn(evaluate(p, a))
    while b - a > width:
        m = (a + b) / 2
        sm = _sgn(evaluate(p, m))
        if sm == 0:
            return m, m
        if sm == sa:
            a = m
        else:
            b = m
    return a, b


def power_sums(p, count: int) -> list:
    """Newton power sums s_0..s_{count-1} of the roots of monic p."""
    if not p or p[-1] != 1:
        raise ValueError("power sums need a monic polynomial")
    n = degree(p)
    c = [p[n - k] for k in range(n + 1)]  # c[k] multiplies x^(n-k)
    s = [Fraction(n)]
    for k in range(1, count):
        acc = sum((c[i] * s[k - i] for i in range(1, min(k - 1, n) + 1)), Fraction(0))
        if k <= n:
            acc += k * c[k]
        s.append(-acc)
    return s


def charpoly(M: RationalMatrix) -> tuple:
    """det(x I - M) by the Faddeev-LeVerrier recursion."""
    n = M.rows
    I = RationalMatrix.identity(n)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = RationalMatrix([[0] * n for _ in range(n)])
    for k in range(1, n + 1):
        Mk = M @ (Mk + I * coeffs[n - k + 1])
        coeffs[n - k] = -sum((Mk[i, i] for i in range(n)), Fraction(0)) / k
    return normalize(coeffs)
