"""Command-line interface: ``treepoly <subcommand> …``.

Exit status is 0 on success, 1 when a verification finds a counterexample
and 2 on usage errors.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import compositions as comp
from .algebra import check_composition, compositions_of
from .invariants import closed_form_matches, csf_powersum, gdp, hdp, non_leaf_edges, recurrence_sides, soup, stp
from .search import (INVARIANTS, SearchCapError, builtin_exhibits, check_exhibit, classify, report_json)
from .transforms import csf_gdp_check, verify_bridge
from .trees import (PolarizedTree, TreeError, generate_free_trees, polarized_point, read_tree)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_MAX_N = {"crew": 8, "bridge": 10, "recurrence": 10, "closedform": 12}


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def parse_composition(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.replace(" ", "").strip("()").split(",") if p)
        return check_composition(parts)
    except ValueError as exc:
        raise UsageError(f"bad composition {text!r}: {exc}") from None


def _fmt(alpha: Sequence[int]) -> str:
    return ",".join(map(str, alpha))


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

_COMPUTE = {
    "csf": csf_powersum,
    "gdp": gdp,
    "hdp": hdp,
    "stp": stp,
    "soup": soup,
}


def cmd_invariants(args) -> int:
    try:
        t = read_tree(args.tree)
    except OSError as exc:
        raise UsageError(f"cannot read {args.tree}: {exc}") from None
    except TreeError as exc:
        raise UsageError(f"{args.tree}: {exc}") from None
    chosen = [k for k in _COMPUTE if getattr(args, k)] if not args.all else list(_COMPUTE)
    chosen = chosen or list(_COMPUTE)
    values = {k: _COMPUTE[k](t) for k in chosen}
    if args.format == "json":
        print(json.dumps({k: v.to_json() for k, v in values.items()}, indent=1, sort_keys=True))
    elif len(values) == 1:
        print(next(iter(values.values())).to_text())
    else:
        for k, v in values.items():
            print(f"{k}: {v.to_text()}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# classify / gen
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    try:
        report = classify(args.n, args.invariant, args.jobs, allow_large=args.allow_large)
    except SearchCapError as exc:
        raise UsageError(str(exc)) from None
    text = report_json(report, with_timing=True)
    if args.out:
        import os
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"classify-{args.invariant.replace('+', '_')}-n{args.n}.json")
        with open(path, "w") as fh:
            fh.write(report_json(report) + "\n")
        _err(f"wrote {path}")
    print(text)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n < 1:
        raise UsageError("n must be at least 1")
    first = True
    for t in generate_free_trees(args.n):
        if not first:
            print()
        first = False
        sys.stdout.write(t.to_text())
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _trees_up_to(max_n: int):
    for n in range(1, max_n + 1):
        yield from generate_free_trees(n)


def _per_tree(check: Callable, max_n: int) -> list[dict]:
    return [{"edges": t.edge_list(), "n": t.n, **check(t)} for t in _trees_up_to(max_n)]


def _suite_csf_gdp(max_n: int) -> list[dict]:
    return _per_tree(lambda t: {"ok": csf_gdp_check(t)}, max_n)


def _suite_bridge(max_n: int) -> list[dict]:
    def check(t):
        r = verify_bridge(t)
        return {"ok": r.ok, "pd_identity": r.pd_identity, "mn_identity": r.mn_identity,
                "stp_roundtrip": r.stp_roundtrip, "hdp_roundtrip": r.hdp_roundtrip,
                "literal_p_identity": r.p_identity}
    return _per_tree(check, max_n)


def _suite_recurrence(max_n: int) -> list[dict]:
    def check(t):
        failures = []
        for v, w in non_leaf_edges(t):
            for e in ((v, w), (w, v)):
                lhs, rhs = recurrence_sides(t, e)
                if lhs != rhs:
                    failures.append({"edge": list(e), "lhs": lhs.to_text(), "rhs": rhs.to_text()})
        return {"ok": not failures, "failures": failures}
    return _per_tree(check, max_n)


def _suite_closedform(max_n: int) -> list[dict]:
    rows = []
    for m in range(1, max_n + 1):
        for alpha in compositions_of(m):
            if len(alpha) >= 2 and (alpha[0] < 2 or alpha[-1] < 2):
                continue
            rows.append({"signature": list(alpha), "ok": closed_form_matches(alpha)})
    return rows


def _suite_exhibits(_max_n: int) -> list[dict]:
    rows = []
    for ex in builtin_exhibits():
        checks = check_exhibit(ex)
        rows.append({"exhibit": ex.name, "ok": all(ok for _, ok in checks),
                     "checks": [{"check": c, "ok": ok} for c, ok in checks]})
    return rows


SUITES = {
    "crew": _suite_csf_gdp,
    "bridge": _suite_bridge,
    "recurrence": _suite_recurrence,
    "closedform": _suite_closedform,
    "exhibits": _suite_exhibits,
}


def cmd_verify(args) -> int:
    max_n = args.max_n if args.max_n is not None else DEFAULT_MAX_N.get(args.suite, 0)
    if max_n < 0:
        raise UsageError("--max-n must be non-negative")
    rows = SUITES[args.suite](max_n)
    failures = [r for r in rows if not r["ok"]]
    summary = {"suite": args.suite, "max_n": max_n, "checked": len(rows), "failed": len(failures)}
    if args.suite == "bridge":
        summary["literal_p_identity_failures"] = sum(1 for r in rows if not r["literal_p_identity"])
    if args.report:
        with open(args.report, "w") as fh:
            json.dump({**summary, "results": rows}, fh, indent=1)
    print(json.dumps(summary, sort_keys=True))
    if failures:
        _err("counterexample: " + json.dumps(failures[0]))
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# composition commands
# ---------------------------------------------------------------------------

def _polarized_from_args(args) -> PolarizedTree:
    if not args.tree:
        return polarized_point()
    try:
        t = read_tree(args.tree)
        return PolarizedTree(t, args.left, args.right)
    except OSError as exc:
        raise UsageError(f"cannot read {args.tree}: {exc}") from None
    except TreeError as exc:
        raise UsageError(f"{args.tree}: {exc}") from None


def cmd_family(args) -> int:
    alpha = parse_composition(args.composition)
    a = _polarized_from_args(args)
    try:
        trees = comp.hdp_family(alpha, a, max_vertices=args.max_vertices)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    polys = [hdp(t).to_text() for t in trees]
    out = {"composition": list(alpha), "switches": [list(b) for b in comp.switching_class(alpha)],
           "trees": [t.edge_list() for t in trees], "hdp": polys[0] if polys else None,
           "shared_hdp": len(set(polys)) <= 1}
    print(json.dumps(out, indent=1))
    if not out["shared_hdp"]:
        _err("family members have different hdp")
        return EXIT_FAIL
    return EXIT_OK


def cmd_factor(args) -> int:
    alpha = parse_composition(args.composition)
    fac = comp.irreducible_factorization(alpha)
    raw = comp.switching_class(alpha)
    rev = comp.switching_class(alpha, up_to_reversal=True)
    print(" o ".join(f"({_fmt(f)})" for f in fac.factors))
    print(f"switching class: {len(raw)} compositions, {len(rev)} up to reversal")
    for b in raw:
        print(_fmt(b))
    return EXIT_OK


def cmd_eg(args) -> int:
    try:
        coeffs = [int(c) for c in args.poly.split(",")]
        s1, s2 = comp.gap_free_signatures(coeffs, args.a, args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t1, t2 = comp.gap_free_pair(coeffs, args.a, args.b)
    same = stp(t1) == stp(t2)
    print(f"L1 = ({_fmt(s1)})")
    print(f"L2 = ({_fmt(s2)})")
    print(f"stp equal: {same}")
    print(f"stp: {stp(t1).to_text()}")
    if not same:
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treepoly", description="Tree invariants and HDP families.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="compute invariants of a tree file")
    p.add_argument("--tree", required=True, help="edge-list file")
    for k in _COMPUTE:
        p.add_argument(f"--{k}", action="store_true")
    p.add_argument("--all", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("classify", help="partition all free trees on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--invariant", choices=INVARIANTS, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="directory for the timing-free JSON report")
    p.add_argument("--allow-large", action="store_true", help="permit 17 <= n <= 19")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=tuple(SUITES), required=True)
    p.add_argument("--max-n", type=int)
    p.add_argument("--report", help="write per-item results as JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("family", help="trees cap(β ∘ A) over the switching class of α")
    p.add_argument("--composition", required=True)
    p.add_argument("--tree", help="edge-list file for A (default: a single vertex)")
    p.add_argument("--left", type=int, default=0)
    p.add_argument("--right", type=int, default=0)
    p.add_argument("--max-vertices", type=int, default=comp.FAMILY_MAX_VERTICES)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("factor", help="irreducible factorization and switching class")
    p.add_argument("--composition", required=True)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("eg", help="caterpillar pair from a gap-free polynomial")
    p.add_argument("--poly", required=True, help="0/1 coefficients from degree 0, e.g. 1,1,0,1")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(func=cmd_eg)

    p = sub.add_parser("gen", help="list all free trees on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"treepoly {args.command}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
