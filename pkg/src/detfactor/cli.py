"""Command-line entry point: ``detfactor factor|bench|selftest``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from . import bench, selftest
from .factorize import (
    Algorithm,
    DriverConfig,
    Factorization,
    RunStats,
    choose_B,
    factor,
    verify_factorization,
)

ALGOS = {a.value: a for a in Algorithm}


def parse_n(text: str) -> int:
    text = text.strip().replace("_", "")
    n = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    if n < 1:
        raise ValueError("N must be a positive integer")
    return n


def report(f: Factorization, algo: Algorithm, B: int, stats: Optional[RunStats], ms: float) -> dict:
    out = {
        "n": str(f.n),
        "algo": algo.value,
        "B": B,
        "factors": [{"p": str(p), "e": e} for p, e in f.factors],
    }
    if stats is not None:
        out["stats"] = stats.as_json()
    out["ms"] = round(ms, 3)
    return out


def parse_report(text: str) -> dict:
    return json.loads(text)


def cmd_factor(args: argparse.Namespace) -> int:
    try:
        n = parse_n(args.n)
    except ValueError as exc:
        print(f"error: cannot parse N {args.n!r}: {exc}", file=sys.stderr)
        return 2
    algo = ALGOS[args.algo]
    try:
        cfg = DriverConfig(algorithm=algo, B_override=args.B)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    f, stats = factor(n, cfg)
    ms = (time.perf_counter() - t0) * 1000
    if not verify_factorization(f):
        print(f"internal error: factorization of {n} failed verification", file=sys.stderr)
        return 1
    B = choose_B(n, cfg) if algo is Algorithm.SIEVED and n > 1 else 0
    if args.json:
        print(json.dumps(report(f, algo, B, stats if args.stats else None, ms)))
    else:
        print(f)
        if args.stats:
            for key, value in stats.as_json().items():
                print(f"  {key}: {value}")
            print(f"  ms: {ms:.1f}")
    return 0


def _csv_ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_bench(args: argparse.Namespace) -> int:
    if args.bits > args.max_bits:
        print(f"error: {args.bits}-bit inputs exceed the cap of {args.max_bits} bits", file=sys.stderr)
        return 2
    if args.bits < 8:
        print("error: need at least 8 bits", file=sys.stderr)
        return 2
    try:
        B_list = _csv_ints(args.B_list)
        for B in B_list:
            DriverConfig(B_override=B)
    except ValueError as exc:
        print(f"error: bad --B-list: {exc}", file=sys.stderr)
        return 2

    rows = []
    for i in range(args.count):
        n, p, q = bench.semiprime(args.bits, args.seed + i)
        rows.extend(bench.compare(n, B_list))

    if args.json:
        print(json.dumps([{
            "n": str(row.n), "variant": row.variant, "B": row.B,
            "ms": round(row.stats.wall_time * 1000, 3),
            "ring_mults": row.stats.ring_mults,
            "max_poly_degree": row.stats.max_poly_degree,
            "speedup_time": round(row.speedup_time, 4),
            "speedup_mults": round(row.speedup_mults, 4),
            "predicted": round(row.predicted, 4),
            "verified": row.ok,
        } for row in rows]))
    else:
        header = f"{'n':>26} {'variant':>13} {'ms':>10} {'ring_mults':>12} {'max_deg':>9} " \
                 f"{'x time':>7} {'x mults':>8} {'sqrt(Q/rho)':>11}"
        print(header)
        for row in rows:
            print(f"{row.n:>26} {row.variant:>13} {row.stats.wall_time * 1000:>10.1f} "
                  f"{row.stats.ring_mults:>12} {row.stats.max_poly_degree:>9} "
                  f"{row.speedup_time:>7.2f} {row.speedup_mults:>8.2f} {row.predicted:>11.2f}")
    return 0 if all(row.ok for row in rows) else 1


def cmd_selftest(args: argparse.Namespace) -> int:
    return 0 if selftest.run(quick=args.quick) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="detfactor", description="Deterministic integer factorization")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor", help="factor one integer")
    p.add_argument("n", help="positive integer, decimal or 0x-prefixed hex")
    p.add_argument("--algo", choices=sorted(ALGOS), default="sieved")
    p.add_argument("--B", type=int, default=None, help="sieve bound (sieved algorithm only)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("bench", help="compare sieved variants against the Q = 1 baseline")
    p.add_argument("--bits", type=int, default=60)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--B-list", default="3,5,7")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-bits", type=int, default=bench.MAX_BENCH_BITS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="run the built-in invariant suites")
    p.add_argument("--quick", action="store_true", help="reduced sizes, well under a minute")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
