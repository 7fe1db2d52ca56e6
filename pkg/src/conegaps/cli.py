"""Command-line front end: ``conegaps <command> ...``.

Reports are JSON with sorted keys and no timestamps, so identical inputs,
seed and precision give byte-identical output. Exit codes: 0 success,
1 internal error, 2 malformed input, 3 basis not positive, 4 partition
identity violated, 5 an inequality failed or stayed undecided, 6 polynomial
not totally real.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .asymptotics import verify_gap_asymptotics, verify_general_cone_count
from .enumeration import EnumerationLimitError
from .gaps import list_gaps
from .lattice import Cone, Lattice, NotPositiveError, PositiveBasis, positive_bases
from .linalg import RationalMatrix, format_fraction, to_fraction
from .minima import covering_radius, minima_report, verify_gen_small, verify_small_gap
from .numberfield import poly as P
from .numberfield.field import (
    NotTotallyRealError,
    field_from_json,
    ideal_from_generators,
    ideal_from_json,
    init_field,
    unit_ideal,
)
from .numberfield.heights import MAX_BITS, random_integers, verify_height_inequalities
from .numberfield.verify import positive_basis_from_elements, verify_ideal_gaps

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_MALFORMED = 2
EXIT_NOT_POSITIVE = 3
EXIT_PARTITION = 4
EXIT_INEQUALITY = 5
EXIT_NOT_TOTALLY_REAL = 6

DEFAULT_PRECISION = 128


class InputError(ValueError):
    pass


# input -----------------------------------------------------------------------

def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_lattice(path: str) -> Lattice:
    obj = _read_json(path)
    if not isinstance(obj, dict) or "basis" not in obj:
        raise InputError(f"{path}: lattice JSON needs a 'basis' matrix")
    return Lattice.from_json(obj)


def load_matrix(path: str) -> RationalMatrix:
    """A basis matrix from a bare matrix, {"matrix": ...}, {"basis": ...} or a `basis` report."""
    obj = _read_json(path)
    if isinstance(obj, dict):
        if "bases" in obj:
            if not obj["bases"]:
                raise InputError(f"{path}: empty 'bases' list")
            obj = obj["bases"][0]
        for key in ("matrix", "basis"):
            if key in obj:
                return RationalMatrix.from_json(obj[key])
        if "entries" not in obj:
            raise InputError(f"{path}: no basis matrix found")
    return RationalMatrix.from_json(obj)


def load_cone(path: str) -> Cone:
    obj = _read_json(path)
    if not isinstance(obj, dict) or "generators" not in obj:
        raise InputError(f"{path}: cone JSON needs 'generators'")
    return Cone.from_json(obj)


def load_field(source: str):
    if source.endswith(".json") or os.path.isfile(source):
        obj = _read_json(source)
        if isinstance(obj, dict) and "field" in obj:
            obj = obj["field"]  # an `nf init` report
        return field_from_json(obj)
    return init_field(source)


def parse_element(K, text: str):
    """A field element written as a polynomial in x (the root of the defining polynomial)."""
    return K.from_power(P.parse_poly(text))


# output ----------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    return obj


def render(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _config(args, **extra) -> dict:
    out = {
        "command": args.command if not getattr(args, "nf_command", None) else f"nf {args.nf_command}",
        "seed": args.seed,
        "precision": args.precision,
        "version": __version__,
    }
    out.update(extra)
    return out


# commands --------------------------------------------------------------------

def cmd_basis(args) -> int:
    L = load_lattice(args.lattice)
    bases = positive_bases(L, args.count, args.seed)
    report = {
        "config": _config(args, inputs={"lattice": args.lattice}, count=args.count),
        "lattice": L.to_json(),
        "bases": [b.to_json() for b in bases],
    }
    _write(render(report), args.json)
    return EXIT_OK


def _positive_basis(args, L: Lattice) -> PositiveBasis:
    return PositiveBasis(L, load_matrix(args.basis))


def cmd_gaps(args) -> int:
    L = load_lattice(args.lattice)
    X = _positive_basis(args, L)
    t = to_fraction(args.bound)
    gaps = list_gaps(X, t, args.primitive_only)
    report = {
        "config": _config(args, inputs={"lattice": args.lattice, "basis": args.basis}, bound=format_fraction(t),
                          primitive_only=args.primitive_only),
        "gaps": [g.to_json() for g in gaps],
    }
    _write(render(report), args.json)
    return EXIT_OK


def _grid(tmax, steps: int) -> list:
    tmax = to_fraction(tmax)
    if tmax <= 0 or steps < 1:
        raise InputError("--tmax must be positive and --steps at least 1")
    return [tmax * k / steps for k in range(1, steps + 1)]


def cmd_count(args) -> int:
    L = load_lattice(args.lattice)
    grid = _grid(args.tmax, args.steps)
    inputs = {"lattice": args.lattice, "basis": args.basis}
    if args.cone:
        Y = load_cone(args.cone)
        inputs["cone"] = args.cone
        rep = verify_general_cone_count(L, Y, load_matrix(args.basis), grid, threads=args.threads,
                                        prec=args.precision, seed=args.seed)
    else:
        X = _positive_basis(args, L)
        rep = verify_gap_asymptotics(L, X, grid, threads=args.threads, prec=args.precision, seed=args.seed)
    report = {"config": _config(args, inputs=inputs, grid=[format_fraction(t) for t in grid]), "report": rep.to_json()}
    if args.csv:
        _write(rep.to_csv(), args.csv)
    if args.json or args.csv != "-":
        _write(render(report), args.json)
    if not rep.partition_ok:
        print("error: partition identity N_gaps = N_Lplus - N_semigroup violated", file=sys.stderr)
        return EXIT_PARTITION
    return EXIT_OK


def cmd_minima(args) -> int:
    L = load_lattice(args.lattice)
    inputs = {"lattice": args.lattice, "basis": args.basis}
    if args.cone:
        Y = load_cone(args.cone)
        inputs["cone"] = args.cone
        record = verify_gen_small(L, Y, load_matrix(args.basis))
        report = {"config": _config(args, inputs=inputs), "verification": record}
    else:
        X = _positive_basis(args, L)
        cov = covering_radius(L, seed=args.seed)
        record = verify_small_gap(L, X, cov)
        report = {
            "config": _config(args, inputs=inputs),
            "minima": minima_report(L, None if X.is_orthogonal() else X),
            "covering_radius": cov,
            "verification": record,
        }
    _write(render(report), args.json)
    for note in record.notes:
        print(f"note: {note}", file=sys.stderr)
    if not record.holds:
        for q in record.failures():
            print(f"FAILED: {q.name}", file=sys.stderr)
        return EXIT_INEQUALITY
    return EXIT_OK


def _ideal(args, K):
    if args.ideal:
        obj = _read_json(args.ideal)
        if isinstance(obj, dict) and "ideal" in obj:
            obj = obj["ideal"]  # an `nf ideal` report
        return ideal_from_json(K, obj)
    if args.gen:
        return ideal_from_generators(K, [parse_element(K, g) for g in args.gen])
    return unit_ideal(K)


def cmd_nf(args) -> int:
    K = load_field(args.field)
    base = {"field": P.format_poly(K.poly)}
    sub = args.nf_command
    if sub == "init":
        report = {"config": _config(args, **base), "field": K, "det_identity_holds": unit_ideal(K).det_identity_holds()}
        _write(render(report), args.json)
        return EXIT_OK
    if sub == "ideal":
        I = _ideal(args, K)
        report = {
            "config": _config(args, generators=args.gen or [], ideal_file=args.ideal, **base),
            "ideal": I,
            "discriminant": int(K.discriminant),
            "det_identity_holds": I.det_identity_holds(),
        }
        _write(render(report), args.json)
        return EXIT_OK if I.det_identity_holds() else EXIT_INEQUALITY
    if sub == "heights":
        if args.element:
            alphas = [parse_element(K, e) for e in args.element]
        else:
            alphas = random_integers(K, args.count, args.seed, args.entry_bound)
        rec = verify_height_inequalities(K, alphas, args.precision)
        report = {"config": _config(args, count=len(alphas), entry_bound=args.entry_bound,
                                    elements=args.element or [], **base), "heights": rec}
        _write(render(report), args.json)
        if not rec.holds:
            print(f"heights: {rec.failed} failed, {rec.undecided} undecided", file=sys.stderr)
            return EXIT_INEQUALITY
        return EXIT_OK
    # verify-gaps
    I = _ideal(args, K)
    beta = positive_basis_from_elements(I, [parse_element(K, b) for b in args.beta]) if args.beta else None
    rec = verify_ideal_gaps(K, I, beta, seed=args.seed, max_bits=args.precision)
    report = {"config": _config(args, generators=args.gen or [], ideal_file=args.ideal, beta=args.beta or [], **base),
              "ideal": I, "record": rec}
    _write(render(report), args.json)
    if not rec.holds:
        print("verify-gaps: some bound failed or stayed undecided", file=sys.stderr)
        return EXIT_INEQUALITY
    return EXIT_OK


# parser ----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, precision: int) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    p.add_argument("--precision", type=int, default=precision, help=f"working precision in bits (default {precision})")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conegaps", description="Positive lattice bases, gaps and minima.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="distinct positive bases of a lattice")
    p.add_argument("lattice")
    p.add_argument("--count", type=int, default=1)
    _common(p, DEFAULT_PRECISION)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("gaps", help="list the gaps with sup-norm at most --bound")
    p.add_argument("lattice")
    p.add_argument("basis")
    p.add_argument("--bound", required=True)
    p.add_argument("--primitive-only", action="store_true")
    _common(p, DEFAULT_PRECISION)
    p.set_defaults(func=cmd_gaps)

    for name in ("count", "verify-asymptotics"):
        p = sub.add_parser(name, help="exact counts against the predicted leading constant")
        p.add_argument("lattice")
        p.add_argument("basis")
        p.add_argument("--tmax", required=True)
        p.add_argument("--steps", type=int, default=10)
        p.add_argument("--csv", metavar="PATH", help="also write the t-series as CSV ('-' for stdout)")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--cone", metavar="PATH", help="count inside this cone instead of the orthant")
        _common(p, DEFAULT_PRECISION)
        p.set_defaults(func=cmd_count)

    for name in ("minima", "verify-thm"):
        p = sub.add_parser(name, help="successive minima, covering radius and the minima bounds")
        p.add_argument("lattice")
        p.add_argument("basis")
        p.add_argument("--cone", metavar="PATH", help="check the transfer bounds for this cone")
        _common(p, DEFAULT_PRECISION)
        p.set_defaults(func=cmd_minima)

    p = sub.add_parser("nf", help="totally real number fields")
    nf = p.add_subparsers(dest="nf_command", required=True)
    for name in ("init", "ideal", "heights", "verify-gaps"):
        q = nf.add_parser(name)
        q.add_argument("field", help="polynomial such as x^3-3x-1, or a field JSON file")
        if name in ("ideal", "verify-gaps"):
            q.add_argument("--gen", action="append", help="ideal generator as a polynomial in x (repeatable)")
            q.add_argument("--ideal", metavar="PATH", help="ideal JSON file")
        if name == "heights":
            q.add_argument("--count", type=int, default=100)
            q.add_argument("--entry-bound", type=int, default=5)
            q.add_argument("--element", action="append", help="check this element instead (repeatable)")
        if name == "verify-gaps":
            q.add_argument("--beta", action="append", help="positive basis element as a polynomial in x")
        _common(q, MAX_BITS)
        q.set_defaults(func=cmd_nf)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotTotallyRealError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_TOTALLY_REAL
    except NotPositiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_POSITIVE
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InputError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
