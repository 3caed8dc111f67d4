"""Command-line front end.

Exit codes: 0 success, 1 other failure, 2 parse or input error, 3 variable
cap exceeded, 4 variable tables differ.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
import time

from . import __version__
from .dimension import (DEFAULT_TOLERANCE, WeaknessOrder, compare_weakness,
                        measure)
from .errors import CapExceeded, Gr1Error, ParseError, VarTableMismatch
from .expr import DEFAULT_MAX_VARS
from .implication import discrimination_stats, implies
from .spec import Side, conjoin, parse_spec

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4


def _num(x: float) -> float:
    return float(f"{x:.12g}")


def load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_spec(text)
    except ParseError as exc:
        exc.path = path
        raise


def _compose(base, path):
    spec = load(path)
    return spec if base is None else conjoin(base, spec)


def _spec_result(name, spec, args):
    start = time.perf_counter()
    m = measure(spec, args.side, args.max_vars)
    row = {
        "name": name,
        "d1": _num(m.pair.d1),
        "d2": _num(m.pair.d2),
        "empty": m.pair.empty,
        "m": m.pair.m,
        "states": m.automaton.num_states,
        "edges": m.automaton.num_edges,
        "sccs": m.scc_count,
    }
    if args.timing:
        row["seconds"] = _num(time.perf_counter() - start)
    return row, m.pair


def _report(args, **body):
    report = {"tool": "gr1w", "version": __version__, "command": _echo(args)}
    report.update(body)
    return report


def _echo(args):
    echo = {"name": args.command, "side": args.side.value,
            "tolerance": args.tolerance, "max_vars": args.max_vars}
    for key in ("file", "files", "refine", "base", "a", "b", "refinements"):
        if getattr(args, key, None) is not None:
            echo[key] = getattr(args, key)
    return echo


# -- commands --------------------------------------------------------------

def cmd_weakness(args):
    spec = load(args.file)
    name = args.file
    for path in args.refine or ():
        spec = conjoin(spec, load(path))
        name += f" + {path}"
    row, _ = _spec_result(name, spec, args)
    return _report(args, results=[row])


def cmd_compare(args):
    base = load(args.base) if args.base else None
    spec_a, spec_b = _compose(base, args.a), _compose(base, args.b)
    if spec_a.vars != spec_b.vars:
        raise VarTableMismatch(f"{args.a} and {args.b} declare different variables")
    row_a, pa = _spec_result(args.a, spec_a, args)
    row_b, pb = _spec_result(args.b, spec_b, args)
    order = compare_weakness(pa, pb, args.tolerance)
    return _report(args, results=[row_a, row_b],
                   comparison={"a": args.a, "b": args.b, "a_is": order.value})


def cmd_implies(args):
    base = load(args.base) if args.base else None
    spec_a, spec_b = _compose(base, args.a), _compose(base, args.b)
    out = []
    for src, dst, x, y in ((args.a, args.b, spec_a, spec_b), (args.b, args.a, spec_b, spec_a)):
        verdict = implies(x, y, args.side, args.max_vars)
        entry = {"from": src, "to": dst, "holds": verdict.holds}
        if args.witness and verdict.witness is not None:
            entry["witness"] = {
                "stem": [list(x.vars.true_vars(s)) for s in verdict.witness.stem],
                "loop": [list(x.vars.true_vars(s)) for s in verdict.witness.loop],
                "text": verdict.witness.format(x.vars),
                "violates": verdict.reason,
            }
        out.append(entry)
    return _report(args, implication=out)


def _rank_cmp(eps, x, y):
    px, py = x[1], y[1]
    if px.empty != py.empty:
        return 1 if px.empty else -1
    order = compare_weakness(px, py, eps)
    if order is WeaknessOrder.WEAKER:
        return -1
    if order is WeaknessOrder.STRONGER:
        return 1
    return 0


def cmd_rank(args):
    base = load(args.base)
    measured = []
    for path in args.refinements:
        row, pair = _spec_result(path, conjoin(base, load(path)), args)
        measured.append((row, pair))
    ordered = sorted(measured, key=functools.cmp_to_key(
        functools.partial(_rank_cmp, args.tolerance)))
    ranking = []
    rank = 0
    for i, item in enumerate(ordered):
        if i == 0 or _rank_cmp(args.tolerance, ordered[i - 1], item) != 0:
            rank = i + 1
        ranking.append({"rank": rank, "name": item[0]["name"]})
    for entry in ranking:
        entry["tie"] = sum(e["rank"] == entry["rank"] for e in ranking) > 1
    return _report(args, results=[row for row, _ in measured], ranking=ranking)


def cmd_stats(args):
    base = load(args.base) if args.base else None
    specs = [_compose(base, path) for path in args.files]
    stats = discrimination_stats(specs, args.side, args.tolerance, args.max_vars)
    return _report(args, stats={
        "n_specs": stats.n_specs, "n_pairs": stats.n_pairs,
        "pct_impl": _num(stats.pct_impl), "pct_weak": _num(stats.pct_weak)})


# -- output ----------------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def render_table(report) -> str:
    lines = []
    results = report.get("results")
    if results:
        cols = ["name", "d1", "d2", "empty", "m", "states", "edges", "sccs"]
        if "seconds" in results[0]:
            cols.append("seconds")
        cells = [cols] + [[_fmt(r[c]) for c in cols] for r in results]
        widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
        for row in cells:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    if "comparison" in report:
        c = report["comparison"]
        if c["a_is"] in ("equal", "incomparable"):
            lines.append(f"A ({c['a']}) and B ({c['b']}) are {c['a_is']}")
        else:
            lines.append(f"A ({c['a']}) is {c['a_is']} than B ({c['b']})")
    if "ranking" in report:
        lines.append("ranking (weakest first):")
        for e in report["ranking"]:
            tie = "  [tie: equal]" if e["tie"] else ""
            lines.append(f"  {e['rank']}. {e['name']}{tie}")
    for e in report.get("implication", ()):
        lines.append(f"{e['from']} implies {e['to']}: {_fmt(e['holds'])}")
        if "witness" in e:
            w = e["witness"]
            lines.append(f"  witness ({w['violates']}): {w['text']}")
    if "stats" in report:
        s = report["stats"]
        lines.append(f"specs {s['n_specs']}  pairs {s['n_pairs']}  "
                     f"%impl {s['pct_impl']:.1f}  %weak {s['pct_weak']:.1f}")
    return "\n".join(lines) + "\n"


def render_json(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# -- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--side", type=Side.parse, default=Side.ENV,
                        help="units to measure: env, sys or all (default env)")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                        help="equality tolerance for comparisons (default 1e-6)")
    common.add_argument("--max-vars", type=int, default=DEFAULT_MAX_VARS,
                        help="explicit-state variable cap (default 16)")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock seconds per spec")

    parser = argparse.ArgumentParser(prog="gr1w", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gr1w {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weakness", parents=[common], help="weakness pair of a spec")
    p.add_argument("file")
    p.add_argument("--refine", action="append", metavar="FILE",
                   help="conjoin the units of FILE (repeatable)")
    p.set_defaults(func=cmd_weakness)

    for name, func, helptext in (("compare", cmd_compare, "order two specs by weakness"),
                                 ("implies", cmd_implies, "check implication both ways")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("--base", metavar="FILE",
                       help="conjoin both A and B onto the units of FILE")
        if name == "implies":
            p.add_argument("--witness", action="store_true",
                           help="print a lasso counterexample when implication fails")
        p.set_defaults(func=func)

    p = sub.add_parser("rank", parents=[common], help="rank refinements of a base spec")
    p.add_argument("base")
    p.add_argument("refinements", nargs="+")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("stats", parents=[common],
                       help="implication vs weakness discrimination")
    p.add_argument("files", nargs="+")
    p.add_argument("--base", metavar="FILE")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "stats" and len(args.files) < 2:
        parser.error("stats needs at least two files")
    try:
        report = args.func(args)
    except ParseError as exc:
        where = f"{exc.path}: " if getattr(exc, "path", None) else ""
        print(f"gr1w: {where}{exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"gr1w: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VarTableMismatch as exc:
        print(f"gr1w: variable mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except Gr1Error as exc:
        print(f"gr1w: {exc}", file=sys.stderr)
        return EXIT_ERROR
    render = render_json if args.format == "json" else render_table
    sys.stdout.write(render(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
