"""
Third triangle packing: a matching X on the short cycles plus a matching Y
of external edges that closes some X-edges into heavy triangles.

H holds, for every good triplet ``(x, y; z)`` (``xy`` a cycle edge, ``z`` on
another cycle, ``w(xy) <= (1-tau)(w(xz) + w(yz))``), the edges ``xz`` and
``yz`` at augmented weight ``w(xz) + w(yz)``.  ``Y*`` is a maximum augmented
weight matching of H.  For a given X, the edges of ``Y*`` whose triplet edge
lies in X and whose third vertex avoids X become paths ``z - x - y``.

X is random in the analysis.  Here it is fixed by conditional expectations
on ``f(X) = tau/2 * w~(Y*_X) + 2 w(X)``, a lower bound on ``w(T3)``:

* phase 1 fixes each cycle's contribution to the pools L and R,
* phase 2 fixes, L-edge by L-edge, whether it joins X.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

from .classify import _check_tau
from .completion import complete_packing
from .core import (Edge, Matching, MetricInstance, OrientedCyclePacking,
                   StructuralError, TrianglePacking, edge)
from .matching import WeightedGraph, max_weight_matching


@dataclass(frozen=True, order=True)
class Triplet:
    """``(x, y; z)``: cycle edge ``xy`` seen from ``x``, third vertex ``z``."""
    x: int
    y: int
    z: int


@dataclass(frozen=True)
class LabeledEdge:
    triplet: Triplet
    aug: float                # w(xz) + w(yz)

    @property
    def ends(self) -> Edge:
        return edge(self.triplet.x, self.triplet.z)


@dataclass(frozen=True)
class TripletGraph:
    """The multigraph H, stored as its label-reduced simple graph.

    ``edges`` maps each vertex pair to its heaviest label (smallest triplet
    on ties); ``n_triplets`` counts the good triplets found.
    """
    n: int
    edges: dict[Edge, LabeledEdge]
    n_triplets: int

    def labels(self) -> list[LabeledEdge]:
        return [self.edges[k] for k in sorted(self.edges)]


def is_good(inst: MetricInstance, x: int, y: int, z: int, tau: float) -> bool:
    w = inst.w
    return w[x, y] <= (1.0 - tau) * (w[x, z] + w[y, z]) + inst.tol


def build_triplet_graph(inst: MetricInstance, C: OrientedCyclePacking,
                        tau: float) -> TripletGraph:
    _check_tau(tau)
    w = inst.w
    where = C.cycle_index()
    best: dict[Edge, LabeledEdge] = {}
    count = 0

    def offer(lab: LabeledEdge) -> None:
        key = lab.ends
        cur = best.get(key)
        if cur is None or lab.aug > cur.aug or (lab.aug == cur.aug and lab.triplet < cur.triplet):
            best[key] = lab

    for x, y in C.directed_edges():
        ci = where[x][0]
        for z in range(inst.n):
            if where[z][0] == ci or not is_good(inst, x, y, z, tau):
                continue
            count += 1
            aug = float(w[x, z] + w[y, z])
            offer(LabeledEdge(Triplet(x, y, z), aug))
            offer(LabeledEdge(Triplet(y, x, z), aug))
    return TripletGraph(inst.n, best, count)


def max_matching_H(H: TripletGraph) -> tuple[LabeledEdge, ...]:
    """Maximum augmented weight matching ``Y*`` of H, with labels."""
    if not H.edges:
        return ()
    g = WeightedGraph.build(H.n, [(u, v, lab.aug) for (u, v), lab in sorted(H.edges.items())])
    m = max_weight_matching(g)
    return tuple(H.edges[e] for e in m.edges)


def augmented_weight(labels: Sequence[LabeledEdge]) -> float:
    return sum((lab.aug for lab in labels), 0.0)


# ----------------------------------------------------------------------
# The random matching X

Outcome = tuple[int, ...]   # even cycle: (coin,); odd cycle: (deleted, r_edge)


def cycle_outcomes(k: int) -> list[Outcome]:
    """All equally likely phase-1 outcomes of a cycle of length ``k``.

    An odd-cycle outcome ``(d, r)`` deletes edge ``d`` and sends edge ``r``
    to R; ``r`` fixes which of the two path matchings was chosen.
    """
    if k % 2 == 0:
        return [(0,), (1,)]
    return [(d, r) for d in range(k) for r in range(k) if r != d]


def split_positions(k: int, outcome: Outcome) -> tuple[list[int], list[int]]:
    """Edge positions sent to L and to R by one cycle outcome."""
    if k % 2 == 0:
        (coin,) = outcome
        return [p for p in range(k) if p % 2 == coin], []
    d, r = outcome
    i_r = (r - d - 1) % k
    coin = i_r % 2
    chosen = [(d + 1 + i) % k for i in range(k - 1) if i % 2 == coin]
    return sorted(p for p in chosen if p != r), [r]


@dataclass(frozen=True)
class XDrawState:
    """Decisions fixed so far: per-cycle outcomes, then L-edge selection bits."""
    C: OrientedCyclePacking
    outcomes: tuple[Outcome | None, ...]
    bits: tuple[int, ...] = ()

    @classmethod
    def empty(cls, C: OrientedCyclePacking) -> "XDrawState":
        return cls(C, (None,) * len(C.cycles))

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.C.cycles)

    @property
    def L_size(self) -> int:
        odd = sum(1 for c in self.C.cycles if len(c) % 2)
        return (self.n - 3 * odd) // 2

    @property
    def quota(self) -> int:
        return 2 * self.L_size // 3

    @property
    def phase1_done(self) -> bool:
        return all(o is not None for o in self.outcomes)

    def pools(self) -> tuple[list[Edge], list[Edge]]:
        """L (sorted; the phase-2 order) and R, once phase 1 is complete."""
        if not self.phase1_done:
            raise ValueError("phase 1 is not complete")
        L: list[Edge] = []
        R: list[Edge] = []
        for cyc, o in zip(self.C.cycles, self.outcomes):
            k = len(cyc)
            lp, rp = split_positions(k, o)
            L.extend(edge(cyc[p], cyc[(p + 1) % k]) for p in lp)
            R.extend(edge(cyc[p], cyc[(p + 1) % k]) for p in rp)
        return sorted(L), sorted(R)

    def with_outcome(self, i: int, o: Outcome) -> "XDrawState":
        outs = list(self.outcomes)
        outs[i] = o
        return replace(self, outcomes=tuple(outs))

    def with_bit(self, b: int) -> "XDrawState":
        return replace(self, bits=self.bits + (b,))

    def matching(self, inst: MetricInstance | None = None) -> Matching:
        """X for a fully decided state; bits beyond the prefix are forced or 0."""
        L, R = self.pools()
        bits = list(self.bits)
        left = self.quota - sum(bits)
        rest = len(L) - len(bits)
        if left < 0 or left > rest:
            raise ValueError("selection bits inconsistent with the quota")
        if left and left < rest:
            raise ValueError("selection bits do not determine X")
        bits += [1 if left else 0] * rest
        X = [e for e, b in zip(L, bits) if b] + R
        if inst is not None:
            X += _pad(X, inst)
        return Matching(tuple(X))


def _pad(X: list[Edge], inst: MetricInstance) -> list[Edge]:
    """Greedy max-weight edges on uncovered vertices until |X| = n/3."""
    need = inst.n // 3 - len(X)
    if need <= 0:
        return []
    used = {v for e in X for v in e}
    free = [v for v in range(inst.n) if v not in used]
    w = inst.w
    pairs = sorted(((u, v) for i, u in enumerate(free) for v in free[i + 1:]),
                   key=lambda e: (-w[e], e))
    out: list[Edge] = []
    for u, v in pairs:
        if len(out) == need:
            break
        if u in used or v in used:
            continue
        used.update((u, v))
        out.append((u, v))
    return out


class XSampler:
    """Draws X repeatedly for one cycle packing, with per-cycle tables prepared once."""

    def __init__(self, C: OrientedCyclePacking):
        self.C = C
        self.empty = XDrawState.empty(C)
        self.quota = self.empty.quota
        self.tables = []
        for cyc in C.cycles:
            k = len(cyc)
            sets = {}
            for o in cycle_outcomes(k):
                lp, rp = split_positions(k, o)
                sets[o] = ([edge(cyc[p], cyc[(p + 1) % k]) for p in lp],
                           [edge(cyc[p], cyc[(p + 1) % k]) for p in rp])
            self.tables.append((k, sets))

    def draw_outcomes(self, rng: random.Random) -> list[Outcome]:
        outs: list[Outcome] = []
        for k, _ in self.tables:
            if k % 2 == 0:
                outs.append((rng.randrange(2),))
            else:
                d = rng.randrange(k)
                coin = rng.randrange(2)
                chosen = [(d + 1 + j) % k for j in range(k - 1) if j % 2 == coin]
                outs.append((d, rng.choice(chosen)))
        return outs

    def draw(self, rng: random.Random) -> tuple[list[Outcome], list[Edge], list[Edge], list[int]]:
        """Outcomes, sorted L, R, and the indices of the L-edges picked into X."""
        outs = self.draw_outcomes(rng)
        L: list[Edge] = []
        R: list[Edge] = []
        for (_, sets), o in zip(self.tables, outs):
            lo, ro = sets[o]
            L.extend(lo)
            R.extend(ro)
        L.sort()
        picked = rng.sample(range(len(L)), self.quota)
        return outs, L, R, picked

    def draw_edges(self, rng: random.Random) -> list[Edge]:
        _, L, R, picked = self.draw(rng)
        return [L[i] for i in picked] + R


def sample_X(C: OrientedCyclePacking, rng: random.Random,
             inst: MetricInstance | None = None) -> tuple[XDrawState, Matching]:
    """One draw of the randomized X (with its full decision record)."""
    sampler = XSampler(C)
    outs, L, _, picked = sampler.draw(rng)
    chosen = set(picked)
    state = XDrawState(C, tuple(outs), tuple(int(j in chosen) for j in range(len(L))))
    return state, state.matching(inst)


# ----------------------------------------------------------------------
# From X to T3

def restrict(Ystar: Sequence[LabeledEdge], X: Matching) -> list[LabeledEdge]:
    """``Y*_X``: labels whose cycle edge is in X and whose third vertex is not."""
    xe = set(X.edges)
    covered = X.vertices()
    return [lab for lab in Ystar
            if edge(lab.triplet.x, lab.triplet.y) in xe and lab.triplet.z not in covered]


def restrict_and_resolve(Ystar: Sequence[LabeledEdge], X: Matching) -> list[LabeledEdge]:
    """Y*_X with conflicts removed: of two labels on one X-edge keep the heavier.

    Two labels of ``Y*_X`` conflict only when they hang off the same X-edge
    from its two ends; equal weights keep the lexicographically smaller edge.
    """
    yx = restrict(Ystar, X)
    by_xedge: dict[Edge, list[LabeledEdge]] = {}
    for lab in yx:
        by_xedge.setdefault(edge(lab.triplet.x, lab.triplet.y), []).append(lab)
    out = []
    for e in sorted(by_xedge):
        labs = by_xedge[e]
        if len(labs) > 2:
            raise StructuralError(f"X-edge {e} carries {len(labs)} labels of Y*_X")
        if len(labs) == 2:
            a, b = labs
            if (b.aug, tuple(-v for v in b.ends)) > (a.aug, tuple(-v for v in a.ends)):
                a = b
            labs = [a]
        out.extend(labs)
    return sorted(out, key=lambda lab: lab.ends)


def complete_t3(X: Matching, Y: Sequence[LabeledEdge], inst: MetricInstance) -> TrianglePacking:
    """Close each path ``z - x - y`` into a triangle, complete the other X-edges."""
    xe = set(X.edges)
    tris = []
    used: set[Edge] = set()
    for lab in Y:
        t = lab.triplet
        e = edge(t.x, t.y)
        if e not in xe or e in used:
            raise StructuralError(f"label {t} does not hang off a free X-edge")
        used.add(e)
        tris.append((t.x, t.y, t.z))
    return complete_packing(inst, tris, [e for e in X.edges if e not in used])


def f_value(X: Matching, Ystar: Sequence[LabeledEdge], tau: float,
            inst: MetricInstance) -> float:
    """``tau/2 * w~(Y*_X) + 2 w(X)``, a lower bound on ``w(T3)`` for this X."""
    w = inst.w
    return (tau / 2.0 * augmented_weight(restrict(Ystar, X))
            + 2.0 * sum(float(w[e]) for e in X.edges))


# ----------------------------------------------------------------------
# Conditional expectations

def _edge_marginal(k: int) -> tuple[float, float]:
    """P[e in L], P[e in R] for an undecided cycle of length k."""
    if k % 2 == 0:
        return 0.5, 0.0
    return (k - 3) / (2 * k), 1.0 / k


def _vertex_marginal(k: int) -> tuple[float, float]:
    """P[v covered by L], P[v covered by R] for an undecided cycle."""
    if k % 2 == 0:
        return 1.0, 0.0
    return (k - 3) / k, 2.0 / k


def _comb(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def _ratio(a: int, b: int) -> float:
    return a / b if b else 0.0


def conditional_expectation_f(state: XDrawState, Ystar: Sequence[LabeledEdge],
                              tau: float, inst: MetricInstance) -> float:
    """Exact ``E[f(X) | state]``."""
    if state.phase1_done:
        return _phase2_expectation(state, Ystar, tau, inst)
    if state.bits:
        raise ValueError("selection bits fixed before phase 1 is complete")
    w = inst.w
    C = state.C
    where = C.cycle_index()
    nL, q = state.L_size, state.quota
    sel = _ratio(q, nL)                                  # P[selected | in L]
    both = _ratio(q * (nL - q), nL * (nL - 1))           # P[a picked, b not]

    # per-cycle status of each edge position and vertex position
    estat: list[list[tuple[float, float]]] = []
    vstat: list[list[tuple[float, float]]] = []
    for cyc, o in zip(C.cycles, state.outcomes):
        k = len(cyc)
        if o is None:
            estat.append([_edge_marginal(k)] * k)
            vstat.append([_vertex_marginal(k)] * k)
            continue
        lp, rp = split_positions(k, o)
        ls, rs = set(lp), set(rp)
        estat.append([(1.0 if p in ls else 0.0, 1.0 if p in rs else 0.0) for p in range(k)])
        vstat.append([(1.0 if (p in ls or (p - 1) % k in ls) else 0.0,
                       1.0 if (p in rs or (p - 1) % k in rs) else 0.0) for p in range(k)])

    wx = 0.0
    for ci, cyc in enumerate(C.cycles):
        k = len(cyc)
        for p in range(k):
            pl, pr = estat[ci][p]
            wx += float(w[cyc[p], cyc[(p + 1) % k]]) * (sel * pl + pr)

    wy = 0.0
    for lab in Ystar:
        t = lab.triplet
        ci, px = where[t.x]
        _, py = where[t.y]
        k = len(C.cycles[ci])
        p = px if (px + 1) % k == py else py
        el, er = estat[ci][p]
        cj, pz = where[t.z]
        zl, zr = vstat[cj][pz]
        zn = 1.0 - zl - zr
        prob = el * (zl * both + zn * sel) + er * (zl * (1.0 - sel) + zn)
        wy += lab.aug * prob
    return tau / 2.0 * wy + 2.0 * wx


def _phase2_expectation(state: XDrawState, Ystar: Sequence[LabeledEdge],
                        tau: float, inst: MetricInstance) -> float:
    L, R = state.pools()
    s = len(state.bits)
    left = state.quota - sum(state.bits)
    rest = len(L) - s
    if s > len(L) or left < 0 or left > rest:
        raise ValueError("selection bits inconsistent with the quota")
    free_p = _ratio(left, rest)
    both_free = _ratio(_comb(rest - 2, left - 1), _comb(rest, left))
    lidx = {e: i for i, e in enumerate(L)}
    rset = set(R)
    cover: dict[int, Edge] = {}
    for e in L + R:
        cover[e[0]] = cover[e[1]] = e
    w = inst.w

    def p_sel(e: Edge) -> float:
        i = lidx[e]
        return float(state.bits[i]) if i < s else free_p

    wx = sum(float(w[e]) for e in R) + sum(float(w[e]) * p_sel(e) for e in L)
    wy = 0.0
    for lab in Ystar:
        t = lab.triplet
        a = edge(t.x, t.y)
        b = cover.get(t.z)
        if a in rset:
            if b is None:
                prob = 1.0
            elif b in rset:
                prob = 0.0
            else:
                prob = 1.0 - p_sel(b)
        elif a in lidx:
            if b is None:
                prob = p_sel(a)
            elif b in rset:
                prob = 0.0
            else:
                ia, ib = lidx[a], lidx[b]
                if ia < s or ib < s:
                    prob = p_sel(a) * (1.0 - p_sel(b))
                else:
                    prob = both_free
        else:
            prob = 0.0
        wy += lab.aug * prob
    return tau / 2.0 * wy + 2.0 * wx


@dataclass(frozen=True)
class Derandomized:
    state: XDrawState
    X: Matching
    expected_f: float        # E[f(X)] before any decision
    f: float                 # f of the chosen X


def derandomize_X(C: OrientedCyclePacking, Ystar: Sequence[LabeledEdge], tau: float,
                  inst: MetricInstance) -> Derandomized:
    """Fix every random decision to the outcome with the largest conditional expectation."""
    state = XDrawState.empty(C)
    start = conditional_expectation_f(state, Ystar, tau, inst)
    for i, cyc in enumerate(C.cycles):
        best_val, best_o = float("-inf"), None
        for o in cycle_outcomes(len(cyc)):
            val = conditional_expectation_f(state.with_outcome(i, o), Ystar, tau, inst)
            if val > best_val:
                best_val, best_o = val, o
        state = state.with_outcome(i, best_o)
    L, _ = state.pools()
    left = state.quota
    for j in range(len(L)):
        rest = len(L) - j
        if left == 0 or left == rest:
            break
        one = conditional_expectation_f(state.with_bit(1), Ystar, tau, inst)
        zero = conditional_expectation_f(state.with_bit(0), Ystar, tau, inst)
        b = 1 if one >= zero else 0
        state = state.with_bit(b)
        left -= b
    X = state.matching(inst)
    return Derandomized(state, X, start, f_value(X, Ystar, tau, inst))


def iter_completions(state: XDrawState) -> Iterator[tuple[XDrawState, float]]:
    """Every full decision record consistent with ``state``, with its probability."""
    if not state.phase1_done:
        i = state.outcomes.index(None)
        outs = cycle_outcomes(len(state.C.cycles[i]))
        for o in outs:
            for st, p in iter_completions(state.with_outcome(i, o)):
                yield st, p / len(outs)
        return
    L, _ = state.pools()
    s = len(state.bits)
    left = state.quota - sum(state.bits)
    rest = len(L) - s
    total = comb(rest, left)
    for pick in combinations(range(rest), left):
        chosen = set(pick)
        bits = state.bits + tuple(int(j in chosen) for j in range(rest))
        yield replace(state, bits=bits), 1.0 / total


@dataclass(frozen=True)
class T3Result:
    packing: TrianglePacking
    H: TripletGraph
    Ystar: tuple[LabeledEdge, ...]
    X: Matching
    Y: tuple[LabeledEdge, ...]
    f: float
    expected_f: float

    @property
    def aug_Ystar(self) -> float:
        return augmented_weight(self.Ystar)


def build_t3(C: OrientedCyclePacking, inst: MetricInstance, tau: float) -> T3Result:
    H = build_triplet_graph(inst, C, tau)
    Ystar = max_matching_H(H)
    d = derandomize_X(C, Ystar, tau, inst)
    Y = restrict_and_resolve(Ystar, d.X)
    T3 = complete_t3(d.X, Y, inst)
    return T3Result(T3, H, Ystar, d.X, tuple(Y), d.f, d.expected_f)
