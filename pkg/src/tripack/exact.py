"""
Brute-force oracles for small instances.

Everything here is plain enumeration and shares no search logic with the
algorithms it checks.  Hard size caps make accidental exponential runs fail
fast instead of hanging a test run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (Matching, MetricInstance, OrientedCyclePacking,
                   TrianglePacking)
from .matching import WeightedGraph

MAX_PACKING_N = 15
MAX_MATCHING_N = 10
MAX_CYCLE_N = 8
MAX_PARTIAL_CYCLE = 7
MAX_PARTIAL_TOTAL = 12


class OracleSizeError(ValueError):
    """Instance is above the enumeration cap of an oracle."""


@dataclass(frozen=True)
class ExactPacking:
    packing: TrianglePacking
    weight: float
    count: int  # number of perfect packings enumerated


def exact_triangle_packing(inst: MetricInstance) -> ExactPacking:
    """Maximum weight perfect triangle packing by exhaustive enumeration.

    The lowest unused vertex is grouped with every pair of higher unused
    vertices, so packings are visited in lexicographic order and the first
    optimum found is kept.
    """
    n = inst.n
    if n % 3:
        raise ValueError(f"n={n} is not a multiple of 3")
    if n > MAX_PACKING_N:
        raise OracleSizeError(f"n={n} exceeds the oracle cap {MAX_PACKING_N}")
    w = inst.w.tolist()
    best_val = -1.0
    best: list[tuple[int, int, int]] = []
    count = 0
    chosen: list[tuple[int, int, int]] = []

    def rec(free: list[int], acc: float) -> None:
        nonlocal best_val, best, count
        if not free:
            count += 1
            if acc > best_val:
                best_val, best = acc, list(chosen)
            return
        a = free[0]
        rest = free[1:]
        wa = w[a]
        for i in range(len(rest)):
            b = rest[i]
            wab = wa[b]
            wb = w[b]
            for j in range(i + 1, len(rest)):
                c = rest[j]
                chosen.append((a, b, c))
                rec(rest[:i] + rest[i + 1:j] + rest[j + 1:],
                    acc + wab + wa[c] + wb[c])
                chosen.pop()

    rec(list(range(n)), 0.0)
    packing = TrianglePacking.from_vertex_sets(best, inst)
    return ExactPacking(packing, best_val if n else 0.0, count)


def exact_matching(g: WeightedGraph, k: int | None = None) -> Matching:
    """Best matching over all matchings (of exactly ``k`` edges if given)."""
    if g.n > MAX_MATCHING_N:
        raise OracleSizeError(f"n={g.n} exceeds the oracle cap {MAX_MATCHING_N}")
    adj: dict[int, list[tuple[int, float]]] = {v: [] for v in range(g.n)}
    for u, v, wt in g.edges:
        adj[u].append((v, wt))
        adj[v].append((u, wt))
    best_val = -np.inf
    best: list[tuple[int, int]] | None = None
    chosen: list[tuple[int, int]] = []

    def rec(v: int, used: frozenset, acc: float) -> None:
        nonlocal best_val, best
        while v < g.n and v in used:
            v += 1
        if v >= g.n:
            if (k is None or len(chosen) == k) and acc > best_val:
                best_val, best = acc, list(chosen)
            return
        if k is not None and len(chosen) > k:
            return
        rec(v + 1, used, acc)                       # leave v unmatched
        for u, wt in adj[v]:
            if u > v and u not in used:
                chosen.append((v, u))
                rec(v + 1, used | {v, u}, acc + wt)
                chosen.pop()

    rec(0, frozenset(), 0.0)
    if best is None:
        raise ValueError(f"no matching with {k} edges exists")
    return Matching(best)


def _set_partitions(items: list[int], min_block: int):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for size in range(min_block - 1, len(rest) + 1):
        for others in itertools.combinations(rest, size):
            remaining = [x for x in rest if x not in others]
            for tail in _set_partitions(remaining, min_block):
                yield [(first, *others)] + tail


def _best_cycle(block: tuple[int, ...], w: np.ndarray) -> tuple[float, tuple[int, ...]]:
    first, rest = block[0], block[1:]
    best_val, best = -np.inf, block
    for perm in itertools.permutations(rest):
        if perm[0] > perm[-1]:
            continue  # each undirected cycle once
        cyc = (first, *perm)
        val = sum(w[cyc[i], cyc[(i + 1) % len(cyc)]] for i in range(len(cyc)))
        if val > best_val:
            best_val, best = float(val), cyc
    return best_val, best


def exact_cycle_packing(inst: MetricInstance) -> tuple[OrientedCyclePacking, float]:
    """Maximum weight 2-factor (cycles of length >= 3) by enumeration."""
    n = inst.n
    if n < 3:
        raise ValueError("need n >= 3")
    if n > MAX_CYCLE_N:
        raise OracleSizeError(f"n={n} exceeds the oracle cap {MAX_CYCLE_N}")
    cache: dict[tuple[int, ...], tuple[float, tuple[int, ...]]] = {}
    best_val, best = -np.inf, None
    for part in _set_partitions(list(range(n)), 3):
        total = 0.0
        cycles = []
        for block in part:
            if block not in cache:
                cache[block] = _best_cycle(block, inst.w)
            val, cyc = cache[block]
            total += val
            cycles.append(cyc)
        if total > best_val:
            best_val, best = total, cycles
    return OrientedCyclePacking(tuple(best)), float(best_val)  # type: ignore[arg-type]


@dataclass(frozen=True)
class ExactPartial:
    triangles: tuple[tuple[int, int, int], ...]
    edges: tuple[tuple[int, int], ...]
    value: float


def exact_partial_packing(cycles: Sequence[Sequence[int]], inst: MetricInstance,
                          budget: int) -> ExactPartial:
    """Best augmented weight over all partial packings inside the cycles.

    A component (triangle or edge) must lie inside one cycle; at most
    ``budget`` components are used; edges count double.
    """
    if cycles and isinstance(cycles[0], (int, np.integer)):
        cycles = [cycles]  # type: ignore[list-item]
    if any(len(c) > MAX_PARTIAL_CYCLE for c in cycles):
        raise OracleSizeError(f"cycle longer than {MAX_PARTIAL_CYCLE}")
    if sum(len(c) for c in cycles) > MAX_PARTIAL_TOTAL:
        raise OracleSizeError(f"more than {MAX_PARTIAL_TOTAL} vertices")
    w = inst.w
    comps: list[tuple[frozenset, float, tuple]] = []
    for c in cycles:
        for a, b in itertools.combinations(sorted(c), 2):
            comps.append((frozenset((a, b)), 2.0 * w[a, b], (a, b)))
        for a, b, d in itertools.combinations(sorted(c), 3):
            comps.append((frozenset((a, b, d)), float(w[a, b] + w[a, d] + w[b, d]),
                          (a, b, d)))
    best_val, best = 0.0, ()
    chosen: list[tuple] = []

    def rec(start: int, used: frozenset, acc: float) -> None:
        nonlocal best_val, best
        if acc > best_val:
            best_val, best = acc, tuple(chosen)
        if len(chosen) == budget:
            return
        for idx in range(start, len(comps)):
            vs, val, tag = comps[idx]
            if used.isdisjoint(vs):
                chosen.append(tag)
                rec(idx + 1, used | vs, acc + val)
                chosen.pop()

    rec(0, frozenset(), 0.0)
    tris = tuple(t for t in best if len(t) == 3)
    edges = tuple(t for t in best if len(t) == 2)
    return ExactPartial(tris, edges, best_val)


MAX_TREE_L = 8


def exact_expected_f(C: OrientedCyclePacking, labels: Sequence[tuple[int, int, int, float]],
                     tau: float, inst: MetricInstance) -> float:
    """``E[tau/2 * w~(Y*_X) + 2 w(X)]`` over every random choice of the X sampler.

    ``labels`` lists the ``Y*`` edges as ``(x, y, z, augmented weight)``.
    Each cycle contributes its raw choices (coin; or deleted edge, coin and
    R-edge), then every ``floor(2|L|/3)``-subset of L is taken, all weighted
    by their probabilities.
    """
    per_cycle: list[list[tuple[float, list, list]]] = []
    for cyc in C.cycles:
        k = len(cyc)
        ring = [tuple(sorted((cyc[i], cyc[(i + 1) % k]))) for i in range(k)]
        opts = []
        if k % 2 == 0:
            for coin in (0, 1):
                opts.append((0.5, [ring[i] for i in range(coin, k, 2)], []))
        else:
            for d in range(k):
                path = [ring[(d + 1 + i) % k] for i in range(k - 1)]
                for coin in (0, 1):
                    half = path[coin::2]
                    for r in half:
                        opts.append((1.0 / (k * 2 * len(half)),
                                     [e for e in half if e != r], [r]))
        per_cycle.append(opts)
    nL = sum(len(c) for c in C.cycles) - 3 * sum(1 for c in C.cycles if len(c) % 2)
    nL //= 2
    if nL > MAX_TREE_L:
        raise OracleSizeError(f"|L|={nL} exceeds the oracle cap {MAX_TREE_L}")
    q = 2 * nL // 3
    w = inst.w
    total = 0.0
    for combo in itertools.product(*per_cycle):
        p = 1.0
        L: list = []
        R: list = []
        for pr, lo, ro in combo:
            p *= pr
            L += lo
            R += ro
        subsets = list(itertools.combinations(L, q))
        for sub in subsets:
            X = set(sub) | set(R)
            covered = {v for e in X for v in e}
            val = 2.0 * sum(float(w[e]) for e in X)
            val += tau / 2.0 * sum(a for x, y, z, a in labels
                                   if tuple(sorted((x, y))) in X and z not in covered)
            total += p / len(subsets) * val
    return total
