"""Command line front end.

Exit status: 0 on success, 2 on usage or parse errors, 1 when a size or
budget cap is hit.  Data goes to stdout; progress and notes go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import counting, extremal, tanglegram, trees
from .errors import LimitExceeded, TreeParseError
from .experiments import CSV_COLUMNS, DEFAULT_THETA, expectation_experiment
from .rng import GENERATOR_ID, fresh_seed


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _emit(rows: list[dict], columns: list[str], fmt: str, plain: list[str], out, meta: list[str] = ()) -> None:
    if fmt == "json":
        json.dump([{c: r[c] for c in columns} for r in rows], out)
        out.write("\n")
        for line in meta:
            print(f"# {line}", file=sys.stderr)
        return
    if fmt == "csv":
        for line in meta:
            out.write(f"# {line}\n")
        w = csv.DictWriter(out, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
        return
    for line in meta:
        out.write(f"# {line}\n")
    for line in plain:
        out.write(f"{line}\n")


def _shape(text: str, flag: str) -> trees.TreeShape:
    try:
        return trees.parse_shape(text)
    except TreeParseError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _tanglegram(text: str | None) -> tanglegram.Tanglegram:
    if text is None:
        raise UsageError("--tanglegram is required")
    try:
        return tanglegram.parse_tanglegram(text)
    except TreeParseError as exc:
        raise UsageError(f"--tanglegram: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"--tanglegram: {exc}") from None


def _require(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


# ---------------------------------------------------------------------------
# subcommands


def cmd_shapes(args, out):
    _require(args, "n")
    limit = args.exact_limit or trees.DEFAULT_ENUMERATION_LIMIT
    shapes = trees.enumerate_shapes(args.n, limit=limit)
    if args.count:
        _emit([{"n": args.n, "count": len(shapes)}], ["n", "count"], args.format, [str(len(shapes))], out)
        return
    rows = [{"n": args.n, "encoding": s.encoding, "automorphisms": trees.automorphism_order(s)} for s in shapes]
    _emit(rows, ["n", "encoding", "automorphisms"], args.format, [s.encoding for s in shapes], out)


def cmd_count(args, out):
    _require(args, "pattern", "host")
    b, t = _shape(args.pattern, "--pattern"), _shape(args.host, "--host")
    c = counting.count_induced(b, t)
    _emit([{"pattern": b.encoding, "host": t.encoding, "count": c}], ["pattern", "host", "count"], args.format, [str(c)], out)


def cmd_gamma(args, out):
    _require(args, "pattern", "host")
    b, t = _shape(args.pattern, "--pattern"), _shape(args.host, "--host")
    try:
        g = counting.format_rational(counting.gamma(b, t))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit([{"pattern": b.encoding, "host": t.encoding, "gamma": g}], ["pattern", "host", "gamma"], args.format, [g], out)


def cmd_even_inducibility(args, out):
    _require(args, "k")
    v = counting.format_rational(counting.even_inducibility(args.k))
    _emit([{"k": args.k, "inducibility": v}], ["k", "inducibility"], args.format, [v], out)


def cmd_cater_liminf(args, out):
    _require(args, "k")
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    v = counting.format_rational(counting.caterpillar_liminf(args.k))
    _emit([{"k": args.k, "liminf": v}], ["k", "liminf"], args.format, [v], out)


def cmd_lemma_check(args, out):
    _require(args, "k")
    if args.k < 1:
        raise UsageError("--k must be positive")
    report = counting.verify_lemma_functions(args.k)
    cols = ["k", "function", "kind", "bound", "extremum", "location", "value_at_half", "margin", "passed"]
    rows = [
        {
            "k": c.k,
            "function": c.name,
            "kind": c.kind,
            "bound": counting.format_rational(c.bound),
            "extremum": format(c.extremum, ".12g"),
            "location": format(c.location, ".12g"),
            "value_at_half": format(c.value_at_half, ".12g"),
            "margin": format(c.margin, ".12g"),
            "passed": int(c.passed),
        }
        for c in report.checks
    ]
    plain = [f"{r['function']} k={r['k']} {r['kind']} at {r['location']}: {'pass' if r['passed'] else 'FAIL'}" for r in rows]
    _emit(rows, cols, args.format, plain, out)


def cmd_max_gamma(args, out):
    _require(args, "pattern", "n")
    b = _shape(args.pattern, "--pattern")
    cfg = extremal.SearchConfig()
    if args.exact_limit:
        cfg.exact_limit = args.exact_limit
    if args.beam:
        cfg.beam_width = args.beam
    if args.restarts:
        cfg.restarts = args.restarts
    meta = []
    if args.n > cfg.exact_limit:
        if args.seed is None:
            args.seed = fresh_seed()
            meta.append(f"seed: {args.seed}")
        cfg.seed = args.seed
        print(f"searching n={args.n} heuristically", file=sys.stderr)
    if args.n < b.leaf_count:
        raise UsageError("--n is smaller than the pattern")
    report = extremal.max_gamma(b, args.n, cfg)
    row = report.row()
    plain = [counting.format_rational(report.best_value)] + report.argmax
    _emit([row], extremal.REPORT_COLUMNS, args.format, plain, out, meta)


def cmd_conjectures(args, out):
    _require(args, "k", "n")
    limit = args.exact_limit or trees.DEFAULT_ENUMERATION_LIMIT
    rows = [r.row() for r in extremal.conjecture_report(args.k, args.n, limit)]
    plain = [f"n={r['n']} even_is_max={r['even_is_max']} gap={r['gap']} n*gap={r['n_gap']}" for r in rows]
    _emit(rows, extremal.CONJECTURE_COLUMNS, args.format, plain, out)


def cmd_tangle_crt(args, out):
    t = _tanglegram(args.tanglegram)
    best, crt = tanglegram.optimal_layout(t, args.exact_limit or tanglegram.CRT_LIMIT)
    _emit([{"tanglegram": t.text, "crt": crt, "optimal_layout": best.text}], ["tanglegram", "crt", "optimal_layout"], args.format, [str(crt)], out)


def cmd_tangle_bound(args, out):
    t = _tanglegram(args.tanglegram)
    bound = tanglegram.no6_lower_bound(t, args.exact_limit or tanglegram.BOUND_LIMIT)
    copies = tanglegram.no6_copies(t)
    v = counting.format_rational(bound)
    _emit([{"tanglegram": t.text, "no6_copies": copies, "bound": v}], ["tanglegram", "no6_copies", "bound"], args.format, [v], out)


def cmd_tangle_enumerate(args, out):
    _require(args, "n")
    classes = tanglegram.enumerate_tanglegrams(args.n, args.exact_limit or tanglegram.ENUMERATION_LIMIT)
    if args.count:
        _emit([{"n": args.n, "count": len(classes)}], ["n", "count"], args.format, [str(len(classes))], out)
        return
    rows = []
    for c in classes:
        crt = tanglegram.tangle_crossing_exact(tanglegram.parse_tanglegram(c.encoding))
        rows.append({"encoding": c.encoding, "layouts": c.layouts, "automorphisms": c.automorphisms, "crt": crt})
    _emit(rows, ["encoding", "layouts", "automorphisms", "crt"], args.format, [r["encoding"] for r in rows], out)


def cmd_tangle_experiment(args, out):
    _require(args, "n")
    trials = args.trials or 100
    meta = [f"generator: {GENERATOR_ID}"]
    if args.seed is None:
        args.seed = fresh_seed()
        meta.append(f"seed: {args.seed}")
    theta = args.theta if args.theta is not None else DEFAULT_THETA
    print(f"sampling {trials} layouts with n={args.n}", file=sys.stderr)
    try:
        r = expectation_experiment(args.n, trials, args.seed, theta, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    row = r.row()
    plain = [f"{c}={row[c]}" for c in CSV_COLUMNS]
    fmt = args.format if args.format != "plain" or args.format_given else "csv"
    _emit([row], CSV_COLUMNS, fmt, plain, out, meta)


COMMANDS = {
    "shapes": cmd_shapes,
    "count": cmd_count,
    "gamma": cmd_gamma,
    "even-inducibility": cmd_even_inducibility,
    "cater-liminf": cmd_cater_liminf,
    "lemma-check": cmd_lemma_check,
    "max-gamma": cmd_max_gamma,
    "conjectures": cmd_conjectures,
    "tangle-crt": cmd_tangle_crt,
    "tangle-bound": cmd_tangle_bound,
    "tangle-enumerate": cmd_tangle_enumerate,
    "tangle-experiment": cmd_tangle_experiment,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="inducibility", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--pattern")
        p.add_argument("--host")
        p.add_argument("--tanglegram")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--theta", type=_rational)
        p.add_argument("--beam", type=int)
        p.add_argument("--restarts", type=int)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--format", choices=("plain", "csv", "json"), default=None)
        p.add_argument("--exact-limit", type=int)
        p.add_argument("--count", action="store_true")
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.format_given = args.format is not None
    if args.format is None:
        args.format = "plain"
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return 2
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return 2
    try:
        buf = io.StringIO()
        COMMANDS[args.command](args, buf)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out.write(buf.getvalue())
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
