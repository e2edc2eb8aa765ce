"""The full pipeline: cycle packing, three candidate packings, best of three."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .core import MetricInstance, OrientedCyclePacking, Report, TrianglePacking, packing_weight
from .cyclepack import ShortCycleParams, max_weight_cycle_packing, split_to_short
from .exact import MAX_PACKING_N, exact_triangle_packing
from .pack1 import build_t1
from .pack2 import build_t2
from .pack3 import T3Result, build_t3


@dataclass
class Solution:
    report: Report
    packing: TrianglePacking
    Cstar: OrientedCyclePacking
    C: OrientedCyclePacking
    T1: TrianglePacking
    T2: TrianglePacking
    T3: T3Result
    Bstar: TrianglePacking | None = None
    timings: dict[str, float] = field(default_factory=dict)


def solve(inst: MetricInstance, eps: float = 0.2, tau: float = 0.25,
          seed: int | None = None, exact: bool = False) -> Solution:
    """Run the approximation algorithm; optionally compare against the exact optimum.

    Wall-clock times are kept in ``Solution.timings`` only, so the report
    stays byte-identical across runs.
    """
    n = inst.n
    if n % 3:
        raise ValueError(f"n={n} is not a multiple of 3")
    params = ShortCycleParams(eps)
    timings: dict[str, float] = {}
    clock = time.perf_counter()

    def lap(name: str) -> None:
        nonlocal clock
        now = time.perf_counter()
        timings[name] = now - clock
        clock = now

    Cstar = max_weight_cycle_packing(inst)
    lap("cycle_packing")
    C = split_to_short(Cstar, inst, eps)
    lap("split")
    T1, _ = build_t1(C, inst, max_len=params.max_len)
    lap("T1")
    T2, _ = build_t2(inst)
    lap("T2")
    t3 = build_t3(C, inst, tau)
    lap("T3")

    cands = [("T1", T1), ("T2", T2), ("T3", t3.packing)]
    weights = [packing_weight(p, inst) for _, p in cands]
    best_i = max(range(3), key=lambda i: (weights[i], -i))
    best = cands[best_i][1]
    w_best = weights[best_i]

    Bstar = None
    w_B = ratio = None
    if exact:
        if n > MAX_PACKING_N:
            raise ValueError(f"--exact needs n <= {MAX_PACKING_N}")
        opt = exact_triangle_packing(inst)
        lap("exact")
        Bstar, w_B = opt.packing, opt.weight
        ratio = w_best / w_B if w_B > 0 else 1.0

    report = Report(
        n=n, eps=eps, tau=tau, seed=seed,
        w_Cstar=packing_weight(Cstar, inst), w_C=packing_weight(C, inst),
        w_T1=weights[0], w_T2=weights[1], w_T3=weights[2], w_best=w_best,
        w_Bstar=w_B, ratio=ratio,
        extra={
            "best": cands[best_i][0],
            "cycles_Cstar": [len(c) for c in Cstar.cycles],
            "cycles_C": [len(c) for c in C.cycles],
            "aug_Ystar": t3.aug_Ystar,
            "f_X": t3.f,
            "packing": [list(t) for t in best.vertex_sets()],
        },
    )
    return Solution(report, best, Cstar, C, T1, T2, t3, Bstar, timings)
