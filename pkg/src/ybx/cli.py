"""Command-line interface.

Exit codes: 0 on success, 1 on a mathematical failure (the witness is
printed), 2 on usage or input-format errors. Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import canon, hunt
from .formats import (dumps, pair_to_json, parse_group, parse_matrix, parse_table,
                      parse_vector, solution_from_json, solution_to_json, table_record)
from .kernel import (Eq13Violation, GroupTooLarge, complete_affine, complete_solution,
                     to_permutation, verify_algebraic, verify_set)
from .modmat import GroupSpec, NotInvertible, Ring, ShapeMismatch


class UsageError(Exception):
    pass


def _checks(text: str) -> tuple[str, ...]:
    items = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = set(items) - set(hunt.CHECKS)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown checks: {','.join(sorted(bad))}")
    return items


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from exc


def _emit(obj, out=None):
    print(dumps(obj), file=out or sys.stdout)


def _summary(count_raw, count_canonical, checks, t0, timing):
    s = {"count_raw": count_raw, "count_canonical": count_canonical, "checks": list(checks)}
    if timing:
        s["elapsed"] = round(time.perf_counter() - t0, 6)
    return {"summary": s}


def cmd_verify(args) -> int:
    text = _read(args.file)
    checks = args.checks
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = None
    if obj is None:
        # permutation table text format
        if args.mod is None or args.rank is None:
            raise UsageError("table input needs --mod and --rank")
        try:
            R = parse_table(text, GroupSpec(args.mod, args.rank))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        report = verify_set(R, checks)
    else:
        try:
            sol = solution_from_json(obj)
        except (NotInvertible, Eq13Violation) as exc:
            _emit({"error": "completion failed", "reason": str(exc)})
            return 1
        except (ValueError, ShapeMismatch) as exc:
            raise UsageError(str(exc)) from exc
        if args.set_level:
            report = verify_set(to_permutation(sol, cap=args.cap), checks, cap=args.cap)
        else:
            report = verify_algebraic(sol, checks)
    _emit(report.to_json())
    return 0 if report.ok else 1


def cmd_construct(args) -> int:
    try:
        g = GroupSpec(args.mod, args.rank)
        a = parse_matrix(args.a, g.ring)
        b = parse_matrix(args.b, g.ring)
        z = parse_vector(args.z) if args.z is not None else None
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        sol = complete_solution(g, a, b) if z is None else complete_affine(g, a, b, z)
    except NotInvertible as exc:
        _emit({"error": "NotInvertible", "which": exc.which})
        return 1
    except Eq13Violation:
        _emit({"error": "Eq13Violation", "witness": {
            "ab": (a @ b).tolist(), "ba+aba": (b @ a + a @ b @ a).tolist()}})
        return 1
    except ShapeMismatch as exc:
        raise UsageError(str(exc)) from exc
    _emit(solution_to_json(sol))
    return 0


def cmd_enumerate(args) -> int:
    t0 = time.perf_counter()
    g = GroupSpec(args.mod, args.rank)
    try:
        pairs = hunt.enumerate_linear(g.m, g.N, budget=args.budget, workers=args.workers)
    except hunt.BudgetExceeded as exc:
        raise UsageError(str(exc)) from exc
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for a, b in pairs:
            _emit(pair_to_json(g, a, b), out)
        _emit(_summary(len(pairs), None, ["eq13"], t0, not args.no_timing), out)
    finally:
        if args.out:
            out.close()
    return 0


def cmd_search_set(args) -> int:
    t0 = time.perf_counter()
    try:
        census = hunt.enumerate_set_theoretic(args.n, args.checks, args.max_pairs, args.workers)
    except hunt.CapExceeded as exc:
        raise UsageError(str(exc)) from exc
    for t in census.tables:
        _emit(table_record(t, args.n))
    _emit(_summary(census.count_raw, census.count_canonical, census.checks, t0,
                   not args.no_timing))
    return 0


def cmd_classify(args) -> int:
    obj = json.loads(_read(args.file))
    try:
        if "group" in obj:
            ring = parse_group(obj["group"]).ring
        else:
            ring = Ring.from_json(obj.get("ring", {"ring": "Z"}))
        a = parse_matrix(obj["a"], ring)
        b = parse_matrix(obj["b"], ring) if "b" in obj else None
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    report = canon.classify(a, b)
    if args.probe_prop5:
        report["prop5_probe"] = canon.probe_prop5(a, b)
    _emit(report)
    return 0


def cmd_cross_validate(args) -> int:
    try:
        cv = hunt.cross_validate(args.mod, args.rank, args.max_pairs, args.workers)
    except hunt.CapExceeded as exc:
        raise UsageError(str(exc)) from exc
    _emit(cv.to_json())
    return 0 if cv.inclusion else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ybx", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def search_flags(sp):
        sp.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: $YBX_WORKERS or 1)")
        sp.add_argument("--no-timing", action="store_true", help="omit elapsed time")

    v = sub.add_parser("verify", help="verify a solution JSON or permutation table")
    v.add_argument("file")
    v.add_argument("--set-level", action="store_true")
    v.add_argument("--checks", type=_checks, default=hunt.CHECKS)
    v.add_argument("--mod", type=int, help="modulus for table input")
    v.add_argument("--rank", type=int, help="rank for table input")
    v.add_argument("--cap", type=int, default=4096)
    v.set_defaults(func=cmd_verify)

    for name in ("construct", "construct-affine"):
        c = sub.add_parser(name, help="complete (a, b[, z]) to a full solution")
        c.add_argument("--mod", type=int, required=True)
        c.add_argument("--rank", type=int, required=True)
        c.add_argument("--a", required=True)
        c.add_argument("--b", required=True)
        c.add_argument("--z", required=name == "construct-affine")
        c.set_defaults(func=cmd_construct)

    e = sub.add_parser("enumerate", help="all linear (a, b) pairs")
    e.add_argument("--mod", type=int, required=True)
    e.add_argument("--rank", type=int, required=True)
    e.add_argument("--out")
    e.add_argument("--budget", type=int, default=10**6)
    search_flags(e)
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("search-set", help="census of permutation solutions on tiny X")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--checks", type=_checks, default=hunt.CHECKS)
    s.add_argument("--max-pairs", type=int, default=9)
    search_flags(s)
    s.set_defaults(func=cmd_search_set)

    k = sub.add_parser("classify", help="nilpotency and Jordan type of a")
    k.add_argument("file")
    k.add_argument("--probe-prop5", action="store_true",
                   help="test integer conjugacy to shift-block form")
    k.set_defaults(func=cmd_classify)

    x = sub.add_parser("cross-validate", help="linear solutions vs raw census")
    x.add_argument("--mod", type=int, required=True)
    x.add_argument("--rank", type=int, required=True)
    x.add_argument("--max-pairs", type=int, default=9)
    x.add_argument("--workers", type=int, default=None)
    x.set_defaults(func=cmd_cross_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, json.JSONDecodeError, GroupTooLarge, ValueError) as exc:
        print(f"ybx: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
