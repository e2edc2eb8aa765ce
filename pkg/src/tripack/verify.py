"""
Verification suites: oracle agreement and Monte-Carlo checks of the bounds.

Each suite is a plain function returning a `SuiteResult`; the CLI and the
acceptance tests call the same functions.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .core import (MetricInstance, OrientedCyclePacking, gen_euclidean,
                   gen_graph_metric, packing_weight)
from .cyclepack import gadget_solution, max_weight_cycle_packing, split_to_short
from .exact import (exact_cycle_packing, exact_expected_f, exact_matching,
                    exact_partial_packing, exact_triangle_packing)
from .matching import (InfeasibleMatchingError, WeightedGraph, max_weight_matching,
                       max_weight_matching_of_size, max_weight_perfect_matching)
from .pack1 import best_partial_packing
from .pack2 import Z_EDGE_BOUND, ZSampler, verify_Z, z_case_fixture
from .pack3 import (XDrawState, XSampler, augmented_weight, build_triplet_graph,
                    complete_t3, derandomize_X, max_matching_H, restrict_and_resolve)
from .solver import solve
from .tradeoff import instance_ledger


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    lines: list[str] = field(default_factory=list)
    checks: int = 0
    failures: int = 0
    seconds: float = 0.0

    def check(self, ok: bool, line: str) -> None:
        self.checks += 1
        if not ok:
            self.failures += 1
            self.passed = False
            self.lines.append("FAIL " + line)
        else:
            self.lines.append("ok   " + line)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: {self.checks - self.failures}/{self.checks} checks "
                f"({self.seconds:.1f} s)")


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def run(*args, **kwargs) -> SuiteResult:
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _close(a: float, b: float, rel: float = 1e-12) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def oracle_instances(count: int, sizes: tuple[int, ...], seed: int) -> Iterator[tuple[str, MetricInstance]]:
    """Alternating Euclidean and graph metrics, sizes cycled, seeds derived from ``seed``."""
    for i in range(count):
        n = sizes[i % len(sizes)]
        s = seed * 1000 + i
        if i % 2 == 0:
            yield f"euclid(n={n},seed={s})", gen_euclidean(n, s)
        else:
            yield f"graph(n={n},seed={s})", gen_graph_metric(n, 0.3, s)


def short_cycles(inst: MetricInstance, eps: float = 0.2) -> OrientedCyclePacking:
    return split_to_short(max_weight_cycle_packing(inst), inst, eps)


# ----------------------------------------------------------------------
# Oracle agreement

def random_graph(rng: random.Random, max_n: int = 10) -> WeightedGraph:
    n = rng.randint(2, max_n)
    p = rng.choice([0.3, 0.6, 1.0])
    ints = rng.random() < 0.5
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                wt = float(rng.randint(0, 5)) if ints else rng.random()
                edges.append((u, v, wt))
    return WeightedGraph.build(n, edges)


@_timed
def matching_suite(graphs: int = 200, seed: int = 0) -> SuiteResult:
    """Blossom engine against brute force: free, perfect and fixed-size matchings."""
    res = SuiteResult("matching")
    rng = random.Random(seed)
    agree = 0
    for i in range(graphs):
        g = random_graph(rng)
        ok = _close(g.weight_of(max_weight_matching(g)), g.weight_of(exact_matching(g)))
        k = rng.randint(0, g.n // 2)
        try:
            want = g.weight_of(exact_matching(g, k))
        except ValueError:
            want = None
        try:
            got = g.weight_of(max_weight_matching_of_size(g, k))
        except InfeasibleMatchingError:
            got = None
        ok = ok and (got == want if want is None or got is None else _close(got, want))
        if g.n % 2 == 0:
            try:
                want_p = g.weight_of(exact_matching(g, g.n // 2))
            except ValueError:
                want_p = None
            try:
                got_p = g.weight_of(max_weight_perfect_matching(g))
            except InfeasibleMatchingError:
                got_p = None
            ok = ok and (got_p == want_p if want_p is None or got_p is None
                         else _close(got_p, want_p))
        agree += ok
        if not ok:
            res.check(False, f"graph {i}: n={g.n}, {len(g.edges)} edges disagree")
    res.check(agree == graphs, f"{agree}/{graphs} graphs agree with brute force")
    return res


@_timed
def cyclepack_suite(count: int = 50, seed: int = 0) -> SuiteResult:
    """Gadget 2-factor against brute force; ``w(C*) >= w(B*)`` at n = 6."""
    res = SuiteResult("cyclepack")
    rng = random.Random(seed)
    agree = 0
    for i in range(count):
        n = 4 + i % 5
        s = rng.randrange(10**6)
        inst = gen_euclidean(n, s) if i % 2 == 0 else gen_graph_metric(n, 0.5, s)
        sol = gadget_solution(inst)
        _, best = exact_cycle_packing(inst)
        ok = (_close(sol.weight, best) and _close(sol.matching_weight, 2 * sol.weight)
              and sol.packing.covers(n))
        agree += ok
        if not ok:
            res.check(False, f"instance {i} (n={n}): gadget {sol.weight} vs exact {best}")
        if n == 6:
            wb = exact_triangle_packing(inst).weight
            res.check(sol.weight >= wb - inst.tol,
                      f"n=6 instance {i}: w(C*)={sol.weight:.6g} >= w(B*)={wb:.6g}")
    res.check(agree == count, f"{agree}/{count} instances: gadget equals exact 2-factor")
    return res


@_timed
def pack1_suite(weightings: int = 100, seed: int = 0) -> SuiteResult:
    """Partial-packing DP against enumeration on every cycle length 3..7 and every budget."""
    res = SuiteResult("pack1")
    rng = random.Random(seed)
    agree = total = 0
    layouts = [[k] for k in range(3, 8)] + [[3, 4, 5], [3, 7]]
    for i in range(weightings):
        s = rng.randrange(10**6)
        inst = gen_euclidean(12, s) if i % 2 == 0 else gen_graph_metric(12, 0.4, s)
        for lay in layouts:
            cycles, start = [], 0
            for k in lay:
                cycles.append(tuple(range(start, start + k)))
                start += k
            C = OrientedCyclePacking(tuple(cycles))
            for budget in range(0, sum(lay) // 2 + 1):
                dp = best_partial_packing(C, inst, budget).augmented_weight(inst)
                ex = exact_partial_packing(cycles, inst, budget).value
                total += 1
                if _close(dp, ex):
                    agree += 1
                else:
                    res.check(False, f"weighting {i} layout {lay} budget {budget}: {dp} vs {ex}")
    res.check(agree == total, f"{agree}/{total} (weighting, layout, budget) cases agree")
    return res


# ----------------------------------------------------------------------
# Monte-Carlo: Z

@_timed
def zprob_suite(trials: int = 100_000, seed: int = 0, instances: int = 5,
                tau: float = 0.25) -> SuiteResult:
    """Case fixtures reproduce their conditional probabilities; P[e in Z] on oracle instances."""
    res = SuiteResult("zprob")
    for case in range(1, 7):
        f = z_case_fixture(case)
        sampler = ZSampler(f.Bstar, f.C, tau, f.inst)
        rng = random.Random(seed * 100 + case)
        in_y = in_z = 0
        for _ in range(trials):
            _, Y, Zout = sampler.draw(rng)
            if f.target in Y:
                in_y += 1
                in_z += f.target in Zout
        p = f.expected
        est = in_z / in_y if in_y else math.nan
        sigma = math.sqrt(p * (1 - p) / in_y) if in_y else math.inf
        ok = abs(est - p) <= 3 * sigma + 1e-12
        res.check(ok, f"case {case}: P[e in Z | e in Y] = {est:.5f} vs {p:.5f} "
                      f"(3 sigma = {3 * sigma:.5f}, {in_y} conditioning draws)")
    for name, inst in oracle_instances(instances, (9, 12), seed + 17):
        opt = exact_triangle_packing(inst)
        C = short_cycles(inst)
        rep = verify_Z(opt.packing, C, tau, inst, trials, seed)
        worst = min((e.p_Z for e in rep.edges), default=math.nan)
        ok_edges = all(e.ok for e in rep.edges)
        res.check(ok_edges, f"{name}: {len(rep.edges)} type-1 out-edges, min P[e in Z] = "
                            f"{worst:.5f} >= {Z_EDGE_BOUND:.5f} - 3 sigma")
        res.check(rep.expectation_ok, f"{name}: E[w(Z)] = {rep.mean_wZ:.6g} >= "
                                      f"{rep.bound_wZ:.6g} - 3 sigma")
    return res


# ----------------------------------------------------------------------
# Monte-Carlo: X

def _x_indicator_batches(C: OrientedCyclePacking, n: int, trials: int, seed: int,
                         batch: int = 10_000):
    """Yield ``(E, U)``: cycle-edge membership in X and vertex-uncovered indicators."""
    sampler = XSampler(C)
    edges = sorted(C.edges())
    eidx = {e: i for i, e in enumerate(edges)}
    rng = random.Random(seed)
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        E = np.zeros((b, len(edges)))
        U = np.ones((b, n))
        for t in range(b):
            for e in sampler.draw_edges(rng):
                E[t, eidx[e]] = 1.0
                U[t, e[0]] = U[t, e[1]] = 0.0
        done += b
        yield E, U
    return


@_timed
def xprob_suite(trials: int = 100_000, seed: int = 0, instances: int = 5) -> SuiteResult:
    """``P[e in X] = 1/3`` and ``P[e in X, v not covered] >= 1/9`` for off-cycle ``v``."""
    res = SuiteResult("xprob")
    for name, inst in oracle_instances(instances, (9, 12, 15), seed + 29):
        C = short_cycles(inst)
        st = XDrawState.empty(C)
        odd = sum(1 for c in C.cycles if len(c) % 2)
        res.check(st.L_size * 2 == inst.n - 3 * odd and st.L_size % 3 == 0,
                  f"{name}: |L| = {st.L_size} = (n - 3 * {odd}) / 2, divisible by 3")
        edges = sorted(C.edges())
        where = C.cycle_index()
        n = inst.n
        ecount = np.zeros(len(edges))
        pair = np.zeros((len(edges), n))
        for E, U in _x_indicator_batches(C, n, trials, seed):
            ecount += E.sum(0)
            pair += E.T @ U
        pe = ecount / trials
        s1 = math.sqrt((1 / 3) * (2 / 3) / trials)
        res.check(bool(np.all(np.abs(pe - 1 / 3) <= 3 * s1)),
                  f"{name}: P[e in X] in [{pe.min():.5f}, {pe.max():.5f}], 1/3 +- {3 * s1:.5f}")
        s2 = math.sqrt((1 / 9) * (8 / 9) / trials)
        worst = math.inf
        for i, e in enumerate(edges):
            ci = where[e[0]][0]
            for v in range(n):
                if where[v][0] != ci:
                    worst = min(worst, pair[i, v] / trials)
        res.check(worst >= 1 / 9 - 3 * s2,
                  f"{name}: min P[e in X, v free] = {worst:.5f} >= 1/9 - {3 * s2:.5f}")
    return res


# ----------------------------------------------------------------------
# Derandomization and the T3 bound

def _labels(Ystar) -> list[tuple[int, int, int, float]]:
    return [(l.triplet.x, l.triplet.y, l.triplet.z, l.aug) for l in Ystar]


def monte_carlo_f(C: OrientedCyclePacking, Ystar, tau: float, inst: MetricInstance,
                  trials: int, seed: int) -> tuple[float, float]:
    """Mean and standard error of ``f(X)`` over random draws of X."""
    edges = sorted(C.edges())
    eidx = {e: i for i, e in enumerate(edges)}
    we = np.array([float(inst.w[e]) for e in edges])
    lab_e = np.array([eidx[tuple(sorted((l.triplet.x, l.triplet.y)))] for l in Ystar], dtype=int)
    lab_z = np.array([l.triplet.z for l in Ystar], dtype=int)
    lab_a = np.array([l.aug for l in Ystar])
    vals = []
    for E, U in _x_indicator_batches(C, inst.n, trials, seed):
        f = 2.0 * (E @ we)
        if len(lab_a):
            f += tau / 2.0 * ((E[:, lab_e] * U[:, lab_z]) @ lab_a)
        vals.append(f)
    allv = np.concatenate(vals)
    return float(allv.mean()), float(allv.std(ddof=1) / math.sqrt(len(allv)))


@_timed
def derandom_suite(trials: int = 100_000, seed: int = 0, instances: int = 10,
                   tau: float = 0.25, tree_fixtures: int = 12) -> SuiteResult:
    """Derandomized X beats the random one: Monte-Carlo and exhaustive checks."""
    res = SuiteResult("derandom")
    for name, inst in oracle_instances(instances, (12, 18, 24, 30), seed + 41):
        C = short_cycles(inst)
        Ystar = max_matching_H(build_triplet_graph(inst, C, tau))
        d = derandomize_X(C, Ystar, tau, inst)
        mean, sem = monte_carlo_f(C, Ystar, tau, inst, trials, seed)
        res.check(d.f >= mean - 3 * sem,
                  f"{name}: f(X_det) = {d.f:.6g} >= MC E[f] = {mean:.6g} - 3 * {sem:.2g}")
    found = 0
    for name, inst in oracle_instances(200, (6, 9, 12), seed + 43):
        if found == tree_fixtures:
            break
        C = short_cycles(inst, 0.4)
        if XDrawState.empty(C).L_size > 6:
            continue
        found += 1
        Ystar = max_matching_H(build_triplet_graph(inst, C, tau))
        d = derandomize_X(C, Ystar, tau, inst)
        exact = exact_expected_f(C, _labels(Ystar), tau, inst)
        res.check(d.f >= exact - 1e-9 * max(1.0, exact) and _close(d.expected_f, exact, 1e-9),
                  f"{name} (|L|={XDrawState.empty(C).L_size}): f(X_det) = {d.f:.6g} >= "
                  f"exact E[f] = {exact:.6g}")
    res.check(found == tree_fixtures, f"{found} fixtures with |L| <= 6")
    return res


@_timed
def t3_bound_suite(seed: int = 0, instances: int = 20, tau: float = 0.25,
                   eps: float = 0.2) -> SuiteResult:
    """``w(T3) >= tau/18 w~(Y*) + 2/3 w(C)`` with the derandomized X."""
    res = SuiteResult("t3bound")
    for name, inst in oracle_instances(instances, (9, 12, 15, 18, 21, 24, 27, 30), seed + 53):
        C = short_cycles(inst, eps)
        Ystar = max_matching_H(build_triplet_graph(inst, C, tau))
        d = derandomize_X(C, Ystar, tau, inst)
        T3 = complete_t3(d.X, restrict_and_resolve(Ystar, d.X), inst)
        wt3 = packing_weight(T3, inst)
        bound = tau / 18 * augmented_weight(Ystar) + 2 / 3 * packing_weight(C, inst)
        res.check(wt3 >= bound - 1e-9 * max(1.0, bound),
                  f"{name}: w(T3) = {wt3:.6g} >= {bound:.6g} (f(X) = {d.f:.6g})")
    return res


@_timed
def ledger_suite(seed: int = 0, instances: int = 10, tau: float = 0.25,
                 eps: float = 0.2) -> SuiteResult:
    """The four per-instance lower bounds on ``w(T1)``, ``w(T2)``, ``w(T3)`` against B*."""
    res = SuiteResult("ledger")
    for name, inst in oracle_instances(instances, (9, 12, 15), seed + 67):
        sol = solve(inst, eps, tau, exact=True)
        r = sol.report
        led = instance_ledger(inst, sol.Bstar, sol.C, tau, r.w_T1, r.w_T2, r.w_T3)
        for line in led.lines:
            res.check(line.ok, f"{name}: {line.name}: {line.measured:.6g} >= {line.bound:.6g}")
        res.check(led.best_ratio >= led.adjusted_lp - 1e-9,
                  f"{name}: best/w(B*) = {led.best_ratio:.6f} >= adjusted LP "
                  f"{led.adjusted_lp:.6f}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "matching": matching_suite,
    "cyclepack": cyclepack_suite,
    "pack1": pack1_suite,
    "zprob": zprob_suite,
    "xprob": xprob_suite,
    "derandom": derandom_suite,
    "t3bound": t3_bound_suite,
    "ledger": ledger_suite,
}


def run_suite(name: str, trials: int | None = None, seed: int = 0) -> list[SuiteResult]:
    """Run one suite (or ``all``) with an optional Monte-Carlo trial count."""
    names = list(SUITES) if name == "all" else [name]
    out = []
    for nm in names:
        if nm not in SUITES:
            raise KeyError(nm)
        fn = SUITES[nm]
        if trials is not None and nm in ("zprob", "xprob", "derandom"):
            out.append(fn(trials=trials, seed=seed))
        else:
            out.append(fn(seed=seed))
    return out
