"""
Maximum weight cycle packing and its short-cycle refinement.

`max_weight_cycle_packing` solves the simple 2-factor problem by reduction to
perfect matching.  Every vertex ``u`` gets two copies; every edge ``e = uv``
gets two gadget nodes ``e_u``, ``e_v`` joined by a weight-0 edge, and
``e_u`` (resp. ``e_v``) is joined to both copies of ``u`` (resp. ``v``) with
weight ``w(e)``.  In a perfect matching, either the gadget edge is used
(``e`` unused) or both gadget nodes attach to copies (``e`` used), so the
matching weighs exactly twice the chosen 2-factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import MetricInstance, OrientedCyclePacking, StructuralError, packing_weight
from .matching import WeightedGraph, max_weight_perfect_matching


@dataclass(frozen=True)
class ShortCycleParams:
    eps: float

    def __post_init__(self) -> None:
        if not 0 < self.eps <= 0.4:
            raise ValueError(f"eps must lie in (0, 2/5], got {self.eps}")

    @property
    def max_len(self) -> int:
        # small guard so eps = 2/5 gives 5, not 4, under float rounding
        return int(math.floor(2.0 / self.eps + 1e-9))


@dataclass(frozen=True)
class GadgetSolution:
    packing: OrientedCyclePacking
    matching_weight: float
    weight: float


def _gadget_solve(inst: MetricInstance) -> GadgetSolution:
    n = inst.n
    w = inst.w
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    # copies of u: 2u, 2u+1; gadget nodes of edge k: base+2k (u side), base+2k+1
    base = 2 * n
    edges = []
    for k, (u, v) in enumerate(pairs):
        eu, ev = base + 2 * k, base + 2 * k + 1
        wt = float(w[u, v])
        edges.append((eu, ev, 0.0))
        edges.append((2 * u, eu, wt))
        edges.append((2 * u + 1, eu, wt))
        edges.append((2 * v, ev, wt))
        edges.append((2 * v + 1, ev, wt))
    g = WeightedGraph.build(base + 2 * len(pairs), edges)
    m = max_weight_perfect_matching(g)
    mweight = g.weight_of(m)
    matched = {a: b for a, b in m.edges}
    matched.update({b: a for a, b in m.edges})
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for k, (u, v) in enumerate(pairs):
        eu, ev = base + 2 * k, base + 2 * k + 1
        if matched[eu] == ev:
            continue
        if not (matched[eu] < base and matched[ev] < base):
            raise StructuralError(f"gadget of edge {(u, v)} half-used")
        adj[u].append(v)
        adj[v].append(u)
    cycles = _decode_cycles(adj)
    packing = orient(OrientedCyclePacking(tuple(cycles)))
    return GadgetSolution(packing, mweight, packing_weight(packing, inst))


def _decode_cycles(adj: dict[int, list[int]]) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    cycles = []
    for start in sorted(adj):
        if start in seen:
            continue
        if len(adj[start]) != 2:
            raise StructuralError(f"vertex {start} has degree {len(adj[start])} in 2-factor")
        cyc = [start]
        seen.add(start)
        prev, cur = start, adj[start][0]
        while cur != start:
            if len(adj[cur]) != 2 or cur in seen:
                raise StructuralError("2-factor decode failed")
            cyc.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(tuple(cyc))
    return cycles


def max_weight_cycle_packing(inst: MetricInstance) -> OrientedCyclePacking:
    """Vertex-disjoint cycles (length >= 3) covering all vertices, max weight."""
    if inst.n < 3:
        raise ValueError("a cycle packing needs n >= 3")
    sol = _gadget_solve(inst)
    if not math.isclose(sol.matching_weight, 2.0 * sol.weight,
                        rel_tol=1e-12, abs_tol=1e-12):
        raise StructuralError("gadget matching weight is not twice the 2-factor weight")
    return sol.packing


def gadget_solution(inst: MetricInstance) -> GadgetSolution:
    """Like `max_weight_cycle_packing`, but also return the matching weight."""
    if inst.n < 3:
        raise ValueError("a cycle packing needs n >= 3")
    return _gadget_solve(inst)


# ----------------------------------------------------------------------
# Splitting long cycles

def min_cut_positions(cw: list[float], max_len: int) -> tuple[float, list[int]]:
    """Cheapest set of cycle edges to delete so every arc has 3..max_len vertices.

    ``cw[i]`` is the weight of edge ``i`` (joining positions ``i`` and
    ``i+1``).  Deleting edges ``i_1 < ... < i_m`` leaves arcs whose vertex
    counts are the cyclic gaps ``i_{j+1} - i_j``.  Any valid cut set has its
    smallest index below ``max_len``, so trying each such anchor turns the
    cyclic problem into path DPs.
    """
    k = len(cw)
    best_cost, best_cuts = math.inf, []
    for a in range(min(max_len, k)):
        cost = {a: cw[a]}
        back: dict[int, int] = {}
        for j in range(a + 3, a + k):
            cand, arg = math.inf, -1
            for d in range(3, max_len + 1):
                i = j - d
                if i < a:
                    break
                c = cost.get(i, math.inf)
                if c < cand:
                    cand, arg = c, i
            if arg >= 0:
                cost[j] = cand + cw[j % k]
                back[j] = arg
        for i, c in cost.items():
            gap = a + k - i
            if 3 <= gap <= max_len and c < best_cost:
                cuts = [i]
                while cuts[-1] != a:
                    cuts.append(back[cuts[-1]])
                best_cost, best_cuts = c, sorted(x % k for x in cuts)
    if best_cuts == [] and k > max_len:
        raise StructuralError(f"no valid split for a cycle of length {k}")
    return best_cost, best_cuts


def split_to_short(C: OrientedCyclePacking, inst: MetricInstance,
                   eps: float) -> OrientedCyclePacking:
    """Cut every cycle longer than ``floor(2/eps)`` into short cycles.

    The deleted edges are a minimum-weight valid cut set; each arc is closed
    by the edge joining its two ends.  Short cycles pass through unchanged.
    """
    L = ShortCycleParams(eps).max_len
    out: list[tuple[int, ...]] = []
    for cyc in C.cycles:
        k = len(cyc)
        if k <= L:
            out.append(cyc)
            continue
        cw = [float(inst.w[cyc[i], cyc[(i + 1) % k]]) for i in range(k)]
        _, cuts = min_cut_positions(cw, L)
        for j, c in enumerate(cuts):
            nxt = cuts[(j + 1) % len(cuts)]
            span = (nxt - c) % k or k
            out.append(tuple(cyc[(c + 1 + t) % k] for t in range(span)))
    result = orient(OrientedCyclePacking(tuple(out)))
    if packing_weight(result, inst) < (1 - eps) * packing_weight(C, inst) - inst.tol:
        raise StructuralError("short cycle packing lost more than eps of the weight")
    return result


def orient(C: OrientedCyclePacking) -> OrientedCyclePacking:
    """Canonical direction: start at the minimum vertex, step to its smaller neighbour.

    Cycles are listed in order of their minimum vertex.
    """
    out = []
    for cyc in C.cycles:
        i = cyc.index(min(cyc))
        rot = cyc[i:] + cyc[:i]
        if rot[-1] < rot[1]:
            rot = (rot[0],) + tuple(reversed(rot[1:]))
        out.append(rot)
    out.sort(key=lambda c: c[0])
    return OrientedCyclePacking(tuple(out))
