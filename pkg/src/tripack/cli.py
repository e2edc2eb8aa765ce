"""
Command-line driver.

    tripack solve  --gen euclidean --n 12 --seed 7 --exact
    tripack verify --suite zprob --trials 100000
    tripack lp     --tau 0.25
    tripack bench  --family euclidean --sizes 15,30 --reps 10

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 structural error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Sequence

from .core import (InstanceFormatError, MetricInstance, MetricViolationError,
                   StructuralError, gen_euclidean, gen_graph_metric, load_instance)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_STRUCTURAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _instance(args) -> MetricInstance:
    if args.input:
        return load_instance(args.input)
    if args.gen is None or args.n is None:
        raise UsageError("give --input FILE, or --gen FAMILY with --n")
    return generate(args.gen, args.n, args.seed, args.density)


def generate(family: str, n: int, seed: int, density: float = 0.3) -> MetricInstance:
    if family == "euclidean":
        return gen_euclidean(n, seed)
    if family == "graph":
        return gen_graph_metric(n, density, seed)
    raise UsageError(f"unknown generator family {family!r}")


def _parse_fraction(text: str) -> float:
    return float(Fraction(text.strip()))


def _tau_grid(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:step`` (inclusive stop, fractions allowed)."""
    if ":" in text:
        start, stop, step = (Fraction(p) for p in text.split(":"))
        if step <= 0:
            raise UsageError("tau grid step must be positive")
        out, t = [], start
        while t <= stop:
            out.append(float(t))
            t += step
        return out
    return [_parse_fraction(p) for p in text.split(",") if p.strip()]


# ----------------------------------------------------------------------

def cmd_solve(args) -> int:
    from .solver import solve
    inst = _instance(args)
    sol = solve(inst, args.eps, args.tau, seed=args.seed if not args.input else None,
                exact=args.exact)
    out = sol.report.to_json() + "\n" if args.json else sol.report.to_text()
    sys.stdout.write(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    results = run_suite(args.suite, args.trials, args.seed)
    if args.json:
        print(json.dumps([{"suite": r.name, "passed": r.passed, "checks": r.checks,
                           "failures": r.failures, "lines": r.lines} for r in results], indent=2))
    else:
        for r in results:
            print(f"[{r.name}]")
            for line in r.lines:
                print("  " + line)
            print(r.summary())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_lp(args) -> int:
    from .tradeoff import build_lp, solve_lp
    taus = _tau_grid(args.tau_grid) if args.tau_grid else [_parse_fraction(args.tau)]
    rows = []
    for t in taus:
        if not 0 <= t <= 1 / 3 + 1e-15:
            raise UsageError(f"tau must lie in [0, 1/3], got {t}")
        sol = solve_lp(build_lp(t))
        rows.append({"tau": t, "value": sol.value, "witness": sol.point})
    if args.json:
        print(json.dumps(rows if len(rows) > 1 else rows[0], indent=2))
    elif len(rows) == 1:
        r = rows[0]
        print(f"tau   = {r['tau']!r}")
        print(f"value = {r['value']!r}")
        for k, v in r["witness"].items():
            if abs(v) > 1e-12:
                print(f"  {k:<7} = {v:.10f}")
    else:
        print(f"{'tau':>10} {'value':>12}")
        for r in rows:
            print(f"{r['tau']:10.6f} {r['value']:12.8f}")
    return EXIT_OK


def _bench_job(job: tuple[str, int, int, float, float, float, bool]) -> dict:
    from .solver import solve
    family, n, seed, density, eps, tau, exact = job
    sol = solve(generate(family, n, seed, density), eps, tau, seed=seed,
                exact=exact and n <= 15)
    r = sol.report
    return {"n": n, "seed": seed, "vs_Cstar": r.w_best / r.w_Cstar if r.w_Cstar else 1.0,
            "vs_Bstar": r.ratio, "best": r.extra["best"], "timings": sol.timings}


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if any(n % 3 or n < 3 for n in sizes):
        raise UsageError("every size must be a positive multiple of 3")
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    jobs = [(args.family, n, args.seed * 10_000 + 100 * n + r, args.density,
             args.eps, args.tau, args.exact) for n in sizes for r in range(args.reps)]
    workers = args.workers or min(len(jobs), os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_job, jobs))
    else:
        results = [_bench_job(j) for j in jobs]
    floor = 2 / 3 * (1 - args.eps)
    rows = []
    for n in sizes:
        rs = [r for r in results if r["n"] == n]
        vc = [r["vs_Cstar"] for r in rs]
        vb = [r["vs_Bstar"] for r in rs if r["vs_Bstar"] is not None]
        stages = sorted({k for r in rs for k in r["timings"]})
        rows.append({
            "n": n, "reps": len(rs),
            "mean_vs_Cstar": sum(vc) / len(vc), "min_vs_Cstar": min(vc),
            "mean_vs_Bstar": sum(vb) / len(vb) if vb else None,
            "min_vs_Bstar": min(vb) if vb else None,
            "wins": {k: sum(r["best"] == k for r in rs) for k in ("T1", "T2", "T3")},
            "seconds": {s: sum(r["timings"].get(s, 0.0) for r in rs) / len(rs) for s in stages},
            "ok": min(vc) >= floor - 1e-12,
        })
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'n':>4} {'reps':>4} {'mean/C*':>8} {'min/C*':>8} {'mean/B*':>8} "
              f"{'min/B*':>8}  {'T1/T2/T3 wins':<13}  seconds per stage")
        for r in rows:
            mb = f"{r['mean_vs_Bstar']:8.4f}" if r["mean_vs_Bstar"] is not None else f"{'-':>8}"
            nb = f"{r['min_vs_Bstar']:8.4f}" if r["min_vs_Bstar"] is not None else f"{'-':>8}"
            wins = "/".join(str(r["wins"][k]) for k in ("T1", "T2", "T3"))
            secs = " ".join(f"{k}={v:.3f}" for k, v in r["seconds"].items())
            flag = "" if r["ok"] else f"  BELOW {floor:.4f}"
            print(f"{r['n']:>4} {r['reps']:>4} {r['mean_vs_Cstar']:8.4f} {r['min_vs_Cstar']:8.4f} "
                  f"{mb} {nb}  {wins:<13}  {secs}{flag}")
    return EXIT_OK if all(r["ok"] for r in rows) else EXIT_VERIFY


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tripack", description="Maximum weight metric triangle packing.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def algo_flags(sp):
        sp.add_argument("--eps", type=float, default=0.2, help="short-cycle parameter, (0, 2/5]")
        sp.add_argument("--tau", type=float, default=0.25, help="type split parameter, [0, 1/3]")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", action="store_true")

    s = sub.add_parser("solve", help="run the algorithm on one instance")
    s.add_argument("--input", help="instance file ('n N' then 'i j w' lines)")
    s.add_argument("--gen", choices=["euclidean", "graph"])
    s.add_argument("--n", type=int)
    s.add_argument("--density", type=float, default=0.3)
    s.add_argument("--exact", action="store_true", help="also compute the optimum (n <= 15)")
    algo_flags(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all")
    v.add_argument("--trials", type=int, default=None, help="Monte-Carlo trials")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    l = sub.add_parser("lp", help="solve the trade-off linear program")
    g = l.add_mutually_exclusive_group()
    g.add_argument("--tau", default="0.25", help="a value such as 0.25 or 1/4")
    g.add_argument("--tau-grid", help="'a,b,c' or 'start:stop:step'")
    l.add_argument("--json", action="store_true")
    l.set_defaults(func=cmd_lp)

    b = sub.add_parser("bench", help="ratios and stage timings over generated instances")
    b.add_argument("--family", choices=["euclidean", "graph"], default="euclidean")
    b.add_argument("--sizes", default="15,30")
    b.add_argument("--reps", type=int, default=10)
    b.add_argument("--density", type=float, default=0.3)
    b.add_argument("--exact", action="store_true", help="compare with the optimum when n <= 15")
    b.add_argument("--workers", type=int, default=0)
    algo_flags(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InstanceFormatError, MetricViolationError, ValueError, KeyError,
            OSError) as exc:
        print(f"tripack: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StructuralError as exc:
        print(f"tripack: structural error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL


if __name__ == "__main__":
    sys.exit(main())
