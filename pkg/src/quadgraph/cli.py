"""Command-line front end.

Subcommands: connected, sweep, predict, verify, decompose. Reports go to
stdout (or ``--out``) as JSON with top-level keys meta, results, predicted
and timing. Exit codes: 0 success, 1 usage error, 2 a verification failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time

from . import __version__
from .checks import identity_checks, iso_check, oracle_checks
from .connectivity import DEFAULT_DEPTH, MAX_PRETEST_DEPTH, is_connected, pretest
from .field import FieldCtx, FieldError, odd_primes
from .graph import decompose, extract_trees
from .stats import GROUPS, SweepConfig, iso_class_count, predicted_values, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

DETERMINISM_NOTE = "no randomness; results are independent of --threads"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for failed checks here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _default_threads() -> int:
    env = os.environ.get("QUADGRAPH_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"QUADGRAPH_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise UsageError("QUADGRAPH_THREADS must be positive")
        return n
    return os.cpu_count() or 1


def _positive(s: str) -> int:
    n = int(s)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return n


def _stats_list(s: str) -> tuple[str, ...]:
    names = tuple(x.strip() for x in s.split(",") if x.strip())
    bad = [x for x in names if x not in GROUPS]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown statistic(s) {bad or s!r}; choose from {','.join(GROUPS)}")
    return names


def _p_range(s: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in s.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {s!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {s}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="quadgraph", description="Functional graphs of x^2 + a over F_p.")
    ap.add_argument("--version", action="version", version=f"quadgraph {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, need_p=True):
        sp.add_argument("--p", type=int, required=need_p, help="odd prime modulus")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--threads", type=_positive, default=None,
                        help="worker count (default: QUADGRAPH_THREADS or CPU count)")

    c = sub.add_parser("connected", help="is G_a connected? without --a, count I_p")
    common(c)
    c.add_argument("--a", type=int)
    c.add_argument("--pretest-depth", type=int, default=DEFAULT_DEPTH)
    c.add_argument("--list", action="store_true", help="with no --a, also list the connected a")

    s = sub.add_parser("sweep", help="statistics over all a in F_p")
    common(s)
    s.add_argument("--stats", type=_stats_list, default=GROUPS,
                   help=f"comma list from {','.join(GROUPS)} (default: all)")
    s.add_argument("--max-k", type=int, default=None)
    s.add_argument("--pretest-depth", type=int, default=DEFAULT_DEPTH)
    s.add_argument("--exclude-special", action="store_true",
                   help="drop a in {0, -2} from the cycle, component and tree histograms")
    s.add_argument("--checkpoint")
    s.add_argument("--resume", action="store_true")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--no-timing", action="store_true", help="omit wall time so output is reproducible")

    pr = sub.add_parser("predict", help="closed-form companion values")
    common(pr)

    v = sub.add_parser("verify", help="exact identities and oracle agreement")
    common(v, need_p=False)
    v.add_argument("--p-range", type=_p_range)
    v.add_argument("--iso", action="store_true", help="also check the iso-class count")
    v.add_argument("--pretest-depth", type=int, default=DEFAULT_DEPTH)

    d = sub.add_parser("decompose", help="components and trees of one graph")
    common(d)
    d.add_argument("--a", type=int, required=True)
    d.add_argument("--pretest-depth", type=int, default=DEFAULT_DEPTH)
    return ap


def _field(p: int) -> FieldCtx:
    try:
        return FieldCtx(p)
    except FieldError as e:
        raise UsageError(str(e))


def _check_depth(L: int):
    if not 1 <= L <= MAX_PRETEST_DEPTH:
        raise UsageError(f"--pretest-depth must be in 1..{MAX_PRETEST_DEPTH}")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _meta(args, p, flags: dict) -> dict:
    return {
        "command": args.command,
        "p": p,
        "flags": flags,
        "version": __version__,
        "determinism": DETERMINISM_NOTE,
    }


def cmd_connected(args) -> int:
    ctx = _field(args.p)
    _check_depth(args.pretest_depth)
    if args.a is not None:
        v = pretest(ctx, args.a, args.pretest_depth)
        conn = is_connected(ctx, args.a, args.pretest_depth)
        if args.verbose:
            logging.getLogger(__name__).info("pretest %s, degrees %s", v.outcome.value, v.degrees)
        _emit(_dump({"connected": conn}), args.out)
        return EXIT_OK
    cfg = SweepConfig(ctx.p, ("connected",), pretest_depth=args.pretest_depth,
                      parallelism=args.threads)
    t0 = time.perf_counter()
    agg = run_sweep(cfg)
    res = {"I_p": agg.I_p}
    if args.list:
        res["connected_a"] = sorted(agg.connected)
    report = {
        "meta": _meta(args, ctx.p, {"pretest_depth": args.pretest_depth}),
        "results": {"connected": res},
        "predicted": {},
        "timing": {"wall_seconds": round(time.perf_counter() - t0, 3)},
    }
    _emit(_dump(report), args.out)
    return EXIT_OK


def _csv_report(results: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    blocks = []
    if "cycles" in results:
        blocks.append(("cycles", results["cycles"]["C_k"]))
    if "components" in results:
        blocks.append(("components", results["components"]["N_k"]))
    if "trees" in results:
        blocks.append(("trees", results["trees"]["T_k"]))
        blocks.append(("trees_star", results["trees"]["T_star_k"]))
    for i, (name, row) in enumerate(blocks):
        if i:
            buf.write("\n")
        buf.write(f"# {name}\n")
        w.writerow(["k", "count"])
        for k, cnt in enumerate(row, start=1):
            w.writerow([k, cnt])
    # scalar results follow as key,value rows
    scalars = []
    for group, vals in results.items():
        for key, val in vals.items():
            if isinstance(val, (int, float)) or val is None:
                scalars.append((f"{group}.{key}", val))
    if scalars:
        if blocks:
            buf.write("\n")
        buf.write("# scalars\n")
        w.writerow(["key", "value"])
        for key, val in scalars:
            w.writerow([key, "" if val is None else val])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    ctx = _field(args.p)
    _check_depth(args.pretest_depth)
    if args.resume and not args.checkpoint:
        raise UsageError("--resume needs --checkpoint")
    try:
        cfg = SweepConfig(
            ctx.p, args.stats, max_k=args.max_k, pretest_depth=args.pretest_depth,
            exclude_special=args.exclude_special, parallelism=args.threads,
            checkpoint=args.checkpoint, resume=args.resume,
        )
    except ValueError as e:
        raise UsageError(str(e))
    t0 = time.perf_counter()
    agg = run_sweep(cfg)
    wall = time.perf_counter() - t0
    results = agg.report(cfg)
    if args.format == "csv":
        _emit(_csv_report(results), args.out)
        return EXIT_OK
    flags = {
        "stats": list(cfg.groups),
        "max_k": cfg.max_k,
        "pretest_depth": cfg.pretest_depth,
        "exclude_special": cfg.exclude_special,
    }
    report = {
        "meta": _meta(args, ctx.p, flags),
        "results": results,
        "predicted": predicted_values(ctx).as_dict(),
        "timing": None if args.no_timing else {"wall_seconds": round(wall, 3)},
    }
    _emit(_dump(report), args.out)
    return EXIT_OK


def cmd_predict(args) -> int:
    ctx = _field(args.p)
    _emit(_dump(predicted_values(ctx).as_dict()), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    _check_depth(args.pretest_depth)
    if (args.p is None) == (args.p_range is None):
        raise UsageError("give exactly one of --p or --p-range")
    if args.p is not None:
        primes = [_field(args.p).p]
    else:
        primes = odd_primes(*args.p_range)
        if not primes:
            raise UsageError(f"no odd primes in {args.p_range[0]}:{args.p_range[1]}")
    lines, failed = [], 0
    for p in primes:
        ctx = FieldCtx(p)
        results = identity_checks(ctx, args.threads) + oracle_checks(ctx, args.pretest_depth)
        if args.iso:
            results.append(iso_check(ctx, iso_class_count(ctx, args.threads)))
        for r in results:
            lines.append(r.line())
            failed += not r.passed
    lines.append(f"{len(lines) - failed} passed, {failed} failed")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_decompose(args) -> int:
    ctx = _field(args.p)
    a = args.a % ctx.p
    d = decompose(ctx, a)
    trees = extract_trees(ctx, a, d)
    comps = sorted(
        ({"size": c.size, "cycle_len": c.cycle_len, "contains_zero": c.contains_zero}
         for c in d.components),
        key=lambda c: (-c["size"], c["cycle_len"]),
    )
    res = {
        "a": a,
        "connected": d.connected,
        "components": comps,
        "cyclic_points": int(d.on_cycle.sum()),
        "trees": len(trees),
        "tree_sizes": sorted((t.size for t in trees), reverse=True),
    }
    _emit(_dump({"meta": _meta(args, ctx.p, {"a": a}), "results": res,
                 "predicted": {}, "timing": None}), args.out)
    return EXIT_OK


COMMANDS = {
    "connected": cmd_connected,
    "sweep": cmd_sweep,
    "predict": cmd_predict,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
}


def cmd_run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if args.threads is None:
            args.threads = _default_threads()
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(cmd_run(argv))


if __name__ == "__main__":
    main()
