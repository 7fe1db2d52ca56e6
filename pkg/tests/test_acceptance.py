"""Acceptance criteria 1-11. Each test records one pass/fail line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import json
import math
import random
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from conegaps.asymptotics import solid_angle, verify_gap_asymptotics, verify_general_cone_count
from conegaps.enumeration import Region, enumerate_region
from conegaps.gaps import Status, classify, construct_gap_vectors, in_cone
from conegaps.lattice import Cone, Lattice, PositiveBasis, generate_positive_basis, random_lattice, transport
from conegaps.linalg import RationalMatrix, RationalVector, det
from conegaps.minima import covering_radius, verify_gen_small, verify_small_gap
from conegaps.numberfield.field import ideal_from_generators, init_field, unit_ideal
from conegaps.numberfield.heights import random_integers, verify_height_inequalities
from conegaps.numberfield.verify import positive_basis_from_elements, positive_ideal_basis, verify_ideal_gaps

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

FIELDS = ("x^2-2", "x^2-x-1", "x^3-3x-1")


def check(name, ok, detail=""):
    line = f"  ✅ {name}" + (f" ({detail})" if detail else "") if ok else f"  ❌ {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, f"{name}: {detail}"


def instances():
    """50 random 2D and 10 random 3D (lattice, positive basis) pairs."""
    out = []
    for s in range(50):
        L = random_lattice(2, random.Random(s))
        out.append((L, generate_positive_basis(L, s)))
    for s in range(10):
        L = random_lattice(3, random.Random(100 + s))
        out.append((L, generate_positive_basis(L, 100 + s)))
    return out


def _gaps_by_points(L, X, t):
    pts = enumerate_region(L, Region.BALL, t)
    return sum(1 for v in pts if classify(X, v).status is Status.GAP)


def test_criterion_01_partition_identity():
    bad = []
    rows = 0
    for k, (L, X) in enumerate(instances()):
        grid = [4, 8, 12] if L.dim == 2 else [3, 6]
        rep = verify_gap_asymptotics(L, X, grid)
        for t, a, s, g in rep.rows:
            rows += 1
            # gaps counted independently: L+ points outside the cone
            if g != a - s or _gaps_by_points(L, X, t) != a - s:
                bad.append((k, t))
    check("1 partition identity N_gaps = N_Lplus - N_semigroup", not bad, f"{rows} rows, failures {bad}")


def _semigroup_closure(X, bound):
    """S(X) inside the cube of sup-norm <= bound, by breadth-first addition of basis vectors."""
    xs = [tuple(v) for v in X.vectors]
    start = tuple([Fraction(0)] * X.dim)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for x in xs:
                q = tuple(a + b for a, b in zip(p, x))
                if max(q) <= bound and q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def test_criterion_02_cone_equals_semigroup():
    mismatches = 0
    checked = 0
    for L, X in instances():
        S = _semigroup_closure(X, 20)
        for v in enumerate_region(L, Region.CUBE, 20):
            if any(x < 0 for x in v):
                continue
            checked += 1
            if in_cone(X, v) != (tuple(v) in S):
                mismatches += 1
    check("2 cone membership in L+ <=> semigroup membership (50 2D + 10 3D, sup-norm <= 20)", mismatches == 0,
          f"{checked} points, {mismatches} mismatches")


def test_criterion_03_asymptotics():
    Z2 = Lattice.integer_lattice(2)
    X = PositiveBasis.from_columns(Z2, [(1, 1), (1, 2)])
    nu = solid_angle(Cone(X.matrix))
    pred = math.pi * (1 - 4 * nu.mid) / 4
    rep2 = verify_gap_asymptotics(Z2, X, [50, 100, 200])
    ratio2 = rep2.rows[-1][3] / 200 ** 2
    err2 = abs(ratio2 - pred) / pred
    Z3 = Lattice.integer_lattice(3)
    X3 = PositiveBasis.from_columns(Z3, [(1, 1, 1), (1, 2, 1), (1, 1, 2)])
    rep3 = verify_gap_asymptotics(Z3, X3, [20, 40, 60], threads=2)
    err3 = rep3.relative_error()
    ok = abs(nu.mid - 0.051208) < 1e-6 and abs(pred - 0.6245) < 1e-4 and err2 < 0.1 and err3 < 0.1
    check("3 gap-count asymptotics within 10%", ok,
          f"nu={nu.mid:.6f}, 2D ratio {ratio2:.5f} vs {pred:.5f} ({err2:.2%}); "
          f"3D ratio {rep3.raw_coefficient:.5f} vs {rep3.predicted[0]:.5f} ({err3:.2%})")


def test_criterion_04_small_gap():
    failures = []
    for k, (L, X) in enumerate(instances()):
        rec = verify_small_gap(L, X)
        if not rec.holds or len(rec.inequalities) != L.dim + 1:
            failures.append((k, [q.name for q in rec.failures()]))
    check("4 L+ and gap minima bounds on 50 2D + 10 3D instances", not failures, f"failures {failures}")


def test_criterion_05_gap_construction():
    failures = []
    for k, (L, X) in enumerate(instances()):
        gaps = construct_gap_vectors(X)
        pts = [g.certificate.point for g in gaps]
        ok = all(classify(X, p).status is Status.GAP for p in pts)
        ok = ok and det(RationalMatrix.from_columns(pts)) != 0
        ok = ok and all(RationalVector(p).sup_norm() == g.formula_value for p, g in zip(pts, gaps))
        if not ok:
            failures.append(k)
    check("5 constructed gap vectors certified, independent, sup-norm equal to the formula", not failures,
          f"failures {failures}")


def _gen_instances(n=20):
    out = []
    for s in range(n):
        rng = random.Random(1000 + s)
        d = 2 if s < 14 else 3
        L = random_lattice(d, rng)
        while True:
            Y = RationalMatrix([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
            if det(Y) != 0:
                break
        Y = Cone(Y)
        M = transport(L, Y)
        out.append((L, Y, M, generate_positive_basis(M, 1000 + s)))
    return out


def test_criterion_06_general_cones():
    gen = _gen_instances()
    round_trip = all(Lattice(Y.generators @ M.basis).hnf() == L.hnf() for L, Y, M, _ in gen)
    Z2 = Lattice.integer_lattice(2)
    rep = verify_general_cone_count(Z2, Cone.from_columns([(1, 0), (1, 1)]), RationalMatrix([[3, 2], [1, 1]]),
                                    [50, 100, 200])
    err = rep.relative_error()
    failed = [k for k, (L, Y, M, XM) in enumerate(gen) if not verify_gen_small(L, Y, XM).holds]
    ok = round_trip and rep.partition_ok and err < 0.1 and not failed
    check("6 transport round trip, cone gap count within 10%, transfer bounds on 20 instances", ok,
          f"round trip {round_trip}, count error {err:.2%}, failures {failed}")


def test_criterion_07_covering_radius():
    c2 = covering_radius(Lattice.integer_lattice(2))
    ok2 = c2.exact2 == Fraction(1, 2) and c2.hi - c2.lo < Fraction(1, 10 ** 10)
    c3 = covering_radius(Lattice.integer_lattice(3))
    ok3 = c3.lo2 <= Fraction(3, 4) <= c3.hi2
    bad = []
    for s in range(50):
        c = covering_radius(random_lattice(2, random.Random(s)), seed=s)
        if not (c.is_exact and c.sampled2 <= c.exact2 <= c.jarnik2):
            bad.append(s)
    check("7 covering radius: Z^2 exact sqrt2/2, Z^3 encloses sqrt3/2, 2D exact inside [sampled, Jarnik]",
          ok2 and ok3 and not bad,
          f"Z^2 width {float(c2.hi - c2.lo):.1e}, Z^3 [{float(c3.lo):.6f}, {float(c3.hi):.6f}], bad {bad}")


def _nontrivial_ideals(K, n=5):
    # generator lists, each generator given by its coordinates in the integral basis
    pad = [0] * (K.d - 2)
    cands = [[[n, 0] + pad] for n in (2, 3, 5, 7)]
    cands += [[[k, 1] + pad] for k in range(-3, 6)]
    cands += [[[2, 0] + pad, [1, 1] + pad], [[3, 0] + pad, [1, 1] + pad]]
    out, seen = [], set()
    for gens in cands:
        I = ideal_from_generators(K, [K.element(g) for g in gens])
        key = tuple(map(tuple, I.basis.tolist()))
        if I.norm > 1 and key not in seen:
            seen.add(key)
            out.append(I)
        if len(out) == n:
            break
    return out


def test_criterion_08_det_identity():
    details = []
    ok = True
    for text in FIELDS:
        K = init_field(text)
        ideals = [unit_ideal(K)] + _nontrivial_ideals(K)
        good = all(det(I.gram) == I.norm ** 2 * abs(K.discriminant) for I in ideals)
        ok = ok and good and len(ideals) == 6
        details.append(f"{text}: {len(ideals)} ideals, norms {[I.norm for I in ideals]}")
    check("8 det(trace gram) = N(I)^2 |disc| for O_K and 5 ideals per field", ok, "; ".join(details))


def test_criterion_09_height_inequalities():
    details = []
    ok = True
    for text in FIELDS:
        K = init_field(text)
        rec = verify_height_inequalities(K, random_integers(K, 100, seed=2024), max_bits=256)
        ok = ok and rec.holds and rec.undecided == 0 and len(rec.checks) == 100
        details.append(f"{text}: {len(rec.checks)} elements, {rec.failed} failed, {rec.undecided} undecided")
    check("9 1 <= h <= |Sigma| <= h^d for 100 random integers per field at <= 256 bits", ok, "; ".join(details))


def test_criterion_10_ideal_gaps():
    K = init_field("x^2-2")
    O = unit_ideal(K)
    beta = positive_basis_from_elements(O, [K.one, K.from_power([2, 1])])
    rec = verify_ideal_gaps(K, O, beta)
    first = rec.bounds[0].to_json()
    gap2 = [(a, b) for (a, m, c), b in zip(rec.gaps, rec.bounds[3:]) if tuple(a.power) == (2, -1)]
    chain_ok = (abs(first["lhs"][0] - math.sqrt(2)) < 1e-9 and abs(first["rhs_lo"] - math.sqrt(8)) < 1e-9
                and len(gap2) == 1 and abs(gap2[0][1].to_json()["lhs"][0] - 1.8478) < 1e-4
                and abs(gap2[0][1].to_json()["rhs_lo"] - 4.4142) < 1e-4)
    triples = []
    for text, gens, seed in (("x^2-2", [[3, 0]], 1), ("x^2-x-1", [[3, 1]], 2), ("x^3-3x-1", [[2, 0, 0]], 0)):
        K2 = init_field(text)
        I = ideal_from_generators(K2, [K2.element(g) for g in gens])
        triples.append(verify_ideal_gaps(K2, I, positive_ideal_basis(K2, I, seed)).holds)
    ok = rec.holds and chain_ok and all(triples) and len(triples) >= 3
    check("10 ideal-gap height bounds: Q(sqrt2) chain plus 3 more triples", ok,
          f"chain {chain_ok}, sqrt2 holds {rec.holds}, triples {triples}")


def test_criterion_11_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "z2.json").write_text(json.dumps({"dim": 2, "basis": [[1, 0], [0, 1]]}))
        (tmp / "x.json").write_text(json.dumps({"matrix": [[1, 1], [1, 2]]}))
        (tmp / "y.json").write_text(json.dumps({"generators": [[1, 1], [0, 1]]}))
        (tmp / "xy.json").write_text(json.dumps({"matrix": [[3, 2], [1, 1]]}))
        z2, x, y, xy = (str(tmp / n) for n in ("z2.json", "x.json", "y.json", "xy.json"))
        commands = [
            ["basis", z2, "--count", "3", "--seed", "7"],
            ["gaps", z2, x, "--bound", "5"],
            ["count", z2, x, "--tmax", "60", "--steps", "3", "--csv", "-"],
            ["count", z2, xy, "--tmax", "60", "--steps", "3", "--cone", y],
            ["minima", z2, x, "--seed", "3"],
            ["verify-thm", z2, xy, "--cone", y],
            ["nf", "init", "x^3-3x-1"],
            ["nf", "ideal", "x^2-x-1", "--gen", "x+3"],
            ["nf", "heights", "x^3-3x-1", "--count", "10", "--seed", "5"],
            ["nf", "verify-gaps", "x^2-2", "--beta", "1", "--beta", "x+2"],
        ]
        differ = []
        for cmd in commands:
            runs = [subprocess.run([sys.executable, "-m", "conegaps", *cmd], capture_output=True) for _ in range(2)]
            if runs[0].returncode != 0 or runs[0].stdout != runs[1].stdout or not runs[0].stdout:
                differ.append(" ".join(cmd[:2]))
    check("11 identical seed/precision give byte-identical reports", not differ,
          f"{len(commands)} commands, differing {differ}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
