"""
Second triangle packing and the randomized matching Z used to bound it.

`build_t2` is the algorithm: a maximum weight matching of size n/3, each
edge closed into a triangle.  The sampler for Z needs the optimal packing,
so it only serves verification: it draws Z and `verify_Z` estimates how
often each type-1 out-edge survives into it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .classify import Category, TriangleClass, classify, type_split
from .completion import complete_packing
from .core import (Edge, Matching, MetricInstance, OrientedCyclePacking,
                   StructuralError, TrianglePacking, edge, packing_weight)
from .matching import WeightedGraph, max_weight_matching_of_size

#: Lower bound on P[e in Z] for any type-1 out-edge.
Z_EDGE_BOUND = 97 / 1215


def build_t2(inst: MetricInstance) -> tuple[TrianglePacking, Matching]:
    """Maximum weight matching of size n/3, each edge completed greedily."""
    n = inst.n
    if n % 3:
        raise ValueError(f"n={n} is not a multiple of 3")
    mstar = max_weight_matching_of_size(WeightedGraph.complete(inst), n // 3)
    return complete_packing(inst, (), mstar.edges), mstar


@dataclass(frozen=True)
class ZSample:
    X: tuple[Edge, ...]              # e_t per triangle, in triangle order
    Y: tuple[tuple[int, int], ...]   # selected directed out-edges
    Z: Matching


class ZSampler:
    """Draws the randomized matching Z for a fixed optimal packing.

    Step 1 picks a uniform edge e_t in every triangle (X).  Step 2 keeps the
    out-edges of type-1 triangles that avoid X (Y).  Step 3 splits Y into
    single edges, paths and cycles along the oriented cycles and keeps one of
    the two alternating halves of each path or cycle (an odd cycle first loses
    a uniform edge).  Step 4 falls back to e_t for every triangle with no
    out-edge in Z.
    """

    def __init__(self, Bstar: TrianglePacking, C: OrientedCyclePacking,
                 tau: float, inst: MetricInstance):
        if not Bstar.is_perfect(inst.n):
            raise ValueError("Bstar must be a perfect packing of the instance")
        self.inst = inst
        self.C = C
        self.classes: list[TriangleClass] = type_split(classify(Bstar, C), inst, tau)
        self.tri = [c.triangle.vertices for c in self.classes]
        self.tri_of = {v: i for i, t in enumerate(self.tri) for v in t}
        self.where = C.cycle_index()
        # candidate out-edges of type-1 triangles: (x, x', triangle index)
        self.candidates: list[tuple[int, int, int]] = []
        for i, c in enumerate(self.classes):
            if c.type == 1:
                self.candidates.extend((x, y, i) for x, y in c.out_edges)
        self.owner = {x: i for x, _, i in self.candidates}

    def draw(self, rng: random.Random):
        """One draw as raw lists: ``(opp, Y, Zout)``.

        ``opp[i]`` is the vertex of triangle i not covered by e_t; ``Y`` the
        selected out-edges; ``Zout`` the out-edges kept in Z.
        """
        tri = self.tri
        opp = [t[rng.randrange(3)] for t in tri]
        uncovered = set(opp)
        Y = [(x, y) for x, y, _ in self.candidates if x in uncovered and y in uncovered]
        if not Y:
            return opp, Y, []
        by_cycle: dict[int, list[int]] = {}
        where = self.where
        for x, _ in Y:
            ci, pos = where[x]
            by_cycle.setdefault(ci, []).append(pos)
        Zout: list[tuple[int, int]] = []
        for ci, positions in by_cycle.items():
            cyc = self.C.cycles[ci]
            k = len(cyc)
            present = set(positions)
            if len(present) == k:
                if k % 2 == 0:
                    coin = rng.randrange(2)
                    keep = [p for p in range(k) if p % 2 == coin]
                else:
                    d = rng.randrange(k)
                    coin = rng.randrange(2)
                    keep = [(d + 1 + i) % k for i in range(k - 1) if i % 2 == coin]
            else:
                keep = []
                for p in sorted(present):
                    if (p - 1) % k in present:
                        continue            # not the start of a run
                    run = [p]
                    while (run[-1] + 1) % k in present:
                        run.append((run[-1] + 1) % k)
                    if len(run) == 1:
                        keep.append(p)
                    else:
                        coin = rng.randrange(2)
                        keep.extend(q for i, q in enumerate(run) if i % 2 == coin)
            Zout.extend((cyc[p], cyc[(p + 1) % k]) for p in keep)
        return opp, Y, Zout

    def sample(self, rng: random.Random) -> ZSample:
        opp, Y, Zout = self.draw(rng)
        X = tuple(edge(*[v for v in t if v != o]) for t, o in zip(self.tri, opp))
        covered = {self.owner[x] for x, _ in Zout}
        if len(covered) != len(Zout):
            raise StructuralError("Z holds two out-edges of one triangle")
        Z = [edge(x, y) for x, y in Zout]
        Z.extend(X[i] for i in range(len(self.tri)) if i not in covered)
        return ZSample(X, tuple(Y), Matching(tuple(Z)))

    def z_weight(self, opp, Zout) -> float:
        w = self.inst.w
        covered = {self.owner[x] for x, _ in Zout}
        total = sum(float(w[x, y]) for x, y in Zout)
        for i, (t, o) in enumerate(zip(self.tri, opp)):
            if i not in covered:
                a, b = [v for v in t if v != o]
                total += float(w[a, b])
        return total


def sample_Z(Bstar: TrianglePacking, C: OrientedCyclePacking, tau: float,
             inst: MetricInstance, rng: random.Random) -> ZSample:
    return ZSampler(Bstar, C, tau, inst).sample(rng)


def z_expectation_bound(Bstar: TrianglePacking, C: OrientedCyclePacking,
                        tau: float, inst: MetricInstance) -> float:
    """``w(B)/3 + 97(1-3tau)/7290 w(B_2) + 97(1-3tau)/2430 w(B_4)``."""
    classes = type_split(classify(Bstar, C), inst, tau)
    wb = packing_weight(Bstar, inst)
    w2 = sum(c.triangle.weight(inst) for c in classes if c.klass == 2)
    w4 = sum(c.triangle.weight(inst) for c in classes if c.klass == 4)
    f = 97 * (1 - 3 * tau)
    return wb / 3 + f / 7290 * w2 + f / 2430 * w4


@dataclass
class EdgeEstimate:
    edge: tuple[int, int]
    klass: int
    in_Y: int
    in_Z: int
    trials: int

    @property
    def p_Z(self) -> float:
        return self.in_Z / self.trials

    @property
    def p_Y(self) -> float:
        return self.in_Y / self.trials

    @property
    def p_Z_given_Y(self) -> float:
        return self.in_Z / self.in_Y if self.in_Y else math.nan

    def sigma_Z(self, p0: float = Z_EDGE_BOUND) -> float:
        return math.sqrt(p0 * (1 - p0) / self.trials)

    def sigma_cond(self, p0: float) -> float:
        return math.sqrt(p0 * (1 - p0) / self.in_Y) if self.in_Y else math.inf

    @property
    def ok(self) -> bool:
        return self.p_Z >= Z_EDGE_BOUND - 3 * self.sigma_Z()


@dataclass
class ZReport:
    trials: int
    edges: list[EdgeEstimate] = field(default_factory=list)
    mean_wZ: float = 0.0
    sem_wZ: float = 0.0
    bound_wZ: float = 0.0

    @property
    def expectation_ok(self) -> bool:
        return self.mean_wZ >= self.bound_wZ - 3 * self.sem_wZ

    @property
    def ok(self) -> bool:
        return self.expectation_ok and all(e.ok for e in self.edges)

    def table(self) -> str:
        rows = [f"{'out-edge':>12} {'class':>5} {'P[Y]':>8} {'P[Z]':>8} "
                f"{'P[Z|Y]':>8} {'bound':>8} ok"]
        for e in self.edges:
            rows.append(f"{str(e.edge):>12} {e.klass:>5} {e.p_Y:8.5f} {e.p_Z:8.5f} "
                        f"{e.p_Z_given_Y:8.5f} {Z_EDGE_BOUND:8.5f} {'yes' if e.ok else 'NO'}")
        rows.append(f"E[w(Z)] = {self.mean_wZ:.6g} +- {self.sem_wZ:.2g}  "
                    f"(bound {self.bound_wZ:.6g}) {'ok' if self.expectation_ok else 'FAIL'}")
        return "\n".join(rows)


def verify_Z(Bstar: TrianglePacking, C: OrientedCyclePacking, tau: float,
             inst: MetricInstance, trials: int, seed: int) -> ZReport:
    """Monte-Carlo estimates of P[e in Z] per type-1 out-edge and of E[w(Z)]."""
    sampler = ZSampler(Bstar, C, tau, inst)
    rng = random.Random(seed)
    idx = {(x, y): i for i, (x, y, _) in enumerate(sampler.candidates)}
    inY = [0] * len(idx)
    inZ = [0] * len(idx)
    s1 = s2 = 0.0
    for _ in range(trials):
        opp, Y, Zout = sampler.draw(rng)
        for e in Y:
            inY[idx[e]] += 1
        for e in Zout:
            inZ[idx[e]] += 1
        wz = sampler.z_weight(opp, Zout)
        s1 += wz
        s2 += wz * wz
    mean = s1 / trials
    var = max(0.0, s2 / trials - mean * mean)
    report = ZReport(trials, mean_wZ=mean, sem_wZ=math.sqrt(var / trials),
                     bound_wZ=z_expectation_bound(Bstar, C, tau, inst))
    for (x, y, ti), i in zip(sampler.candidates, range(len(idx))):
        report.edges.append(EdgeEstimate((x, y), sampler.classes[ti].klass,
                                         inY[i], inZ[i], trials))
    return report


def case_probability(case: int, l: int = 5) -> float:
    """Closed-form P[e in Z | e in Y] for the six local configurations."""
    if case == 1:
        return 1.0
    if case == 2:
        return 5 / 6
    if case == 3:
        return 7 / 9
    if case in (4, 5):
        return 13 / 18
    if case == 6:
        return 13 / 18 - (1 / (2 * l)) * (1 / 3) ** (l - 2)
    raise ValueError(f"unknown case {case}")


@dataclass(frozen=True)
class ZCaseFixture:
    case: int
    inst: MetricInstance
    Bstar: TrianglePacking
    C: OrientedCyclePacking
    target: tuple[int, int]
    expected: float


def z_case_fixture(case: int, l: int = 5) -> ZCaseFixture:
    """A small instance realising one local case around the out-edge ``y -> z``.

    Triangle edges weigh 1 and every other pair 2, so each triangle weighs 3
    and every out-edge (weight 2) beats (1-tau)/2 * 3 for any tau >= 0:
    all non-internal triangles are type-1.  Weights in [1, 2] are metric.
    """
    if case == 1:
        cycles = [["x", "y", "z"], ["y1", "y2", "p"]]
        tris = [["x", "z", "p"], ["y", "y1", "y2"]]
    elif case == 2:
        cycles = [["x", "y", "z", "k"], ["x1", "y1", "x2", "y2", "q"]]
        tris = [["x", "x1", "x2"], ["y", "y1", "y2"], ["z", "k", "q"]]
    elif case == 3:
        cycles = [["x", "y", "z"], ["x1", "y1", "z1"], ["x2", "y2", "z2"]]
        tris = [[v, v + "1", v + "2"] for v in "xyz"]
    elif case == 4:
        cycles = [["x", "y", "z", "k"], ["x1", "y1", "z1", "k1"], ["x2", "y2", "z2", "k2"]]
        tris = [[v, v + "1", v + "2"] for v in "xyzk"]
    elif case == 5:
        cycles = [["x", "y", "z", "k", "m"], ["x1", "y1", "z1", "p"], ["x2", "y2", "z2"]]
        tris = [[v, v + "1", v + "2"] for v in "xyz"] + [["k", "m", "p"]]
    elif case == 6:
        if l < 5 or l % 2 == 0:
            raise ValueError("case 6 needs an odd cycle length >= 5")
        vs = [f"v{i}" for i in range(l)]
        cycles = [vs, [f"a{i}" for i in range(l)], [f"b{i}" for i in range(l)]]
        tris = [[f"v{i}", f"a{i}", f"b{i}"] for i in range(l)]
    else:
        raise ValueError(f"unknown case {case}")
    y, z = ("v1", "v2") if case == 6 else ("y", "z")
    ids = {name: i for i, name in enumerate(v for c in cycles for v in c)}
    n = len(ids)
    tri_of = {}
    for t in tris:
        for v in t:
            tri_of[ids[v]] = tuple(sorted(ids[u] for u in t))
    w = np.full((n, n), 2.0)
    for i in range(n):
        for j in range(n):
            if i == j:
                w[i, j] = 0.0
            elif tri_of[i] == tri_of[j]:
                w[i, j] = 1.0
    inst = MetricInstance(w)
    B = TrianglePacking.from_vertex_sets([[ids[v] for v in t] for t in tris], inst)
    C = OrientedCyclePacking(tuple(tuple(ids[v] for v in c) for c in cycles))
    return ZCaseFixture(case, inst, B, C, (ids[y], ids[z]), case_probability(case, l))
