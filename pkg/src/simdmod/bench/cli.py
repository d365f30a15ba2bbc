"""Command line: ``simdmod bench | selftest | goldens``.

CSV goes to stdout, aligned tables and diagnostics to stderr.  The exit code
is 0 on success and 1 on any failure or usage error.
"""

from __future__ import annotations

import argparse
import re
import sys

from simdmod.bench import goldens, harness, selftest


def parse_sizes(text: str) -> list[int]:
    """``2^8..2^20``, ``256,1024`` or a single number."""
    text = text.replace(" ", "")

    def one(tok: str) -> int:
        if "^" in tok:
            b, e = tok.split("^")
            return int(b) ** int(e)
        return int(tok)

    m = re.fullmatch(r"2\^(\d+)\.\.2\^(\d+)", text)
    if m:
        return [1 << k for k in range(int(m.group(1)), int(m.group(2)) + 1)]
    return [one(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simdmod", description="Vectorised modular arithmetic: benchmarks and self-tests.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="time kernels; CSV on stdout, table on stderr")
    b.add_argument("--op", choices=harness.OPS)
    b.add_argument("--lanes", type=int, default=32, help="lane bit-size (8, 16, 32, 64)")
    b.add_argument("--m", type=int, help="modulus bit bound (default: lanes - 2)")
    b.add_argument("--strategy", default="barrett", choices=harness.STRATEGIES)
    b.add_argument("--table", choices=sorted(harness.TABLES))
    b.add_argument("--p", type=int, help="modulus (default: largest m-bit prime, or 469762049 for products)")
    b.add_argument("--sizes", type=parse_sizes, help="e.g. 2^8..2^20")
    b.add_argument("--reps", type=int, default=50)
    b.add_argument("--scalar-reps", type=int, default=3)

    s = sub.add_parser("selftest", help="differential self-tests against exact oracles")
    s.add_argument("--scope", default="all", choices=selftest.SCOPES)
    s.add_argument("--budget", type=float, default=600.0, help="seconds")
    s.add_argument("--mutate", choices=["q-off-by-one"], help="break the Barrett pre-inverse to show the checks fail")

    g = sub.add_parser("goldens", help="dump or verify golden vectors")
    g.add_argument("mode", choices=["dump", "verify"])
    g.add_argument("path")
    return ap


def _bench(args) -> int:
    ghz = harness.cpu_ghz()
    if args.table:
        table, rows = harness.run_table(args.table, reps=args.reps, scalar_reps=args.scalar_reps, sizes=args.sizes, p=args.p)
        harness.emit(rows)
        print(harness.format_table(table, rows, ghz), file=sys.stderr)
        return 0
    if not args.op:
        raise harness.UsageError("bench needs --op or --table")
    m = args.m if args.m is not None else (args.p.bit_length() if args.p else args.lanes - 2)
    spec = harness.BenchSpec(args.op, args.lanes, m, args.strategy, reps=args.reps, p=args.p)
    rows = harness.run_bench(spec, sizes=args.sizes)
    harness.emit(rows)
    for r in rows:
        cyc = f" ({r.ns_median * ghz:.3g} cycles)" if ghz else ""
        print(f"{r.op} {r.strategy} lanes={r.lane_bits} m={r.m} len={r.length}: median {r.ns_median:.3g} ns/elem{cyc}", file=sys.stderr)
    return 0


def _selftest(args) -> int:
    results = selftest.run(args.scope, args.budget, args.mutate, report=lambda line: print(line, flush=True))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _goldens(args) -> int:
    if args.mode == "dump":
        count = goldens.dump(args.path)
        print(f"wrote {count} cases to {args.path}", file=sys.stderr)
        return 0
    try:
        report = goldens.verify(args.path)
    except FileNotFoundError:
        print(f"error: {args.path} does not exist", file=sys.stderr)
        return 1
    except goldens.GoldenParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    for line in report.mismatches[: goldens.MAX_REPORTED]:
        print(line, file=sys.stderr)
    print(f"{report.checked} cases, {len(report.mismatches)} mismatches", file=sys.stderr)
    return 0 if report.ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return {"bench": _bench, "selftest": _selftest, "goldens": _goldens}[args.command](args)
    except harness.UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
