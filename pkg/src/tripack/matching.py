"""
Maximum weight matching in general graphs.

The engine is Edmonds' primal-dual blossom algorithm in the O(n**3)
formulation of Galil (1986).  Weights are real, but the search itself runs
on integers: every weight is scaled by a power of two and rounded, which is
exact for all weights within 2**64 of the largest one.  Integer duals keep
every slack comparison exact, so the solver can neither loop on rounding
noise nor accept a slightly infeasible edge.

Three front-ends share the engine:

* `max_weight_matching` -- any cardinality;
* `max_weight_perfect_matching` -- maximum cardinality mode, must be perfect;
* `max_weight_matching_of_size` -- exactly ``k`` edges, by padding the graph
  with dummy vertices and asking for a perfect matching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Matching, MetricInstance, StructuralError

WeightedEdge = tuple[int, int, float]


class InfeasibleMatchingError(ValueError):
    """No matching with the requested cardinality exists."""


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with real edge weights.

    Use `WeightedGraph.build` to construct one from arbitrary edge lists; it
    canonicalises the edge order and keeps only the heaviest of any parallel
    edges.
    """

    n: int
    edges: tuple[WeightedEdge, ...]

    @classmethod
    def build(cls, n: int, edges: Iterable[Sequence]) -> "WeightedGraph":
        best: dict[tuple[int, int], float] = {}
        for e in edges:
            u, v, wt = int(e[0]), int(e[1]), float(e[2])
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key not in best or wt > best[key]:
                best[key] = wt
        return cls(n, tuple((u, v, wt) for (u, v), wt in sorted(best.items())))

    @classmethod
    def complete(cls, inst: MetricInstance,
                 vertices: Sequence[int] | None = None) -> "WeightedGraph":
        """Complete graph on ``vertices`` (default: all) with metric weights."""
        vs = range(inst.n) if vertices is None else sorted(vertices)
        w = inst.w
        es = [(u, v, float(w[u, v])) for i, u in enumerate(vs) for v in vs[i + 1:]]
        return cls.build(inst.n, es)

    def weight_of(self, matching: Matching) -> float:
        lookup = {(u, v): wt for u, v, wt in self.edges}
        return sum(lookup[e] for e in matching.edges)


def max_weight_matching(g: WeightedGraph) -> Matching:
    """Matching of maximum total weight, of any size.

    Deterministic for a fixed graph: edges are processed in their canonical
    (sorted) order.
    """
    return Matching(_solve(g.n, g.edges, maxcardinality=False))


def max_weight_perfect_matching(g: WeightedGraph) -> Matching:
    """Perfect matching of maximum weight.

    Raises `InfeasibleMatchingError` if the graph has no perfect matching.
    """
    if g.n % 2:
        raise InfeasibleMatchingError(f"odd vertex count {g.n}")
    pairs = _solve(g.n, g.edges, maxcardinality=True)
    if 2 * len(pairs) != g.n:
        raise InfeasibleMatchingError(
            f"maximum matching has {len(pairs)} edges, need {g.n // 2}")
    return Matching(pairs)


def max_weight_matching_of_size(g: WeightedGraph, k: int) -> Matching:
    """Matching with exactly ``k`` edges and maximum weight among those.

    ``n - 2k`` dummy vertices are joined to every real vertex by weight-0
    edges (no dummy-dummy edges); a maximum weight perfect matching of the
    padded graph restricted to real-real edges is the answer.
    """
    n = g.n
    if k < 0 or 2 * k > n:
        raise InfeasibleMatchingError(f"cannot fit {k} disjoint edges in {n} vertices")
    if k == 0:
        return Matching(())
    ndummy = n - 2 * k
    padded = list(g.edges)
    for d in range(n, n + ndummy):
        padded.extend((v, d, 0.0) for v in range(n))
    try:
        pairs = _solve(n + ndummy, padded, maxcardinality=True)
    except StructuralError:
        raise
    if 2 * len(pairs) != n + ndummy:
        raise InfeasibleMatchingError(f"no matching of size {k} exists")
    real = [(u, v) for u, v in pairs if u < n and v < n]
    if len(real) != k:
        raise StructuralError(f"dummy reduction returned {len(real)} edges, want {k}")
    return Matching(real)


# ----------------------------------------------------------------------

def _integer_weights(weights: Sequence[float]) -> list[int]:
    """Scale weights by a common power of two and round to integers."""
    top = max((abs(w) for w in weights), default=0.0)
    if top == 0.0:
        return [0 for _ in weights]
    _, exp = math.frexp(top)
    shift = 116 - exp          # top maps to roughly 2**116
    return [round(math.ldexp(w, shift)) for w in weights]


def _solve(nvertex: int, edges: Sequence[WeightedEdge],
           maxcardinality: bool) -> list[tuple[int, int]]:
    if not edges:
        return []
    iw = _integer_weights([wt for _, _, wt in edges])
    ends = [(u, v) for u, v, _ in edges]
    mate = _blossom(nvertex, ends, iw, maxcardinality)
    return sorted((v, mate[v]) for v in range(nvertex) if mate[v] > v)


def _blossom(nvertex: int, ends: list[tuple[int, int]], weights: list[int],
             maxcardinality: bool) -> list[int]:
    """Core primal-dual search.  Returns ``mate[v]`` (or -1) per vertex.

    Conventions: edge ``k`` has endpoints ``2k`` and ``2k+1``; ``endpoint[p]``
    is the vertex at endpoint ``p`` and ``p ^ 1`` the opposite one.  Vertex
    duals are stored doubled so that all arithmetic stays integral.
    """
    nedge = len(ends)
    maxweight = max(0, max(weights))
    endpoint = [ends[p // 2][p % 2] for p in range(2 * nedge)]
    neighbend: list[list[int]] = [[] for _ in range(nvertex)]
    for k, (i, j) in enumerate(ends):
        neighbend[i].append(2 * k + 1)
        neighbend[j].append(2 * k)

    nb = 2 * nvertex
    mate = [-1] * nvertex                 # remote endpoint of matched edge
    label = [0] * nb                      # 0 free, 1 S, 2 T; bit 4 marks scan
    labelend = [-1] * nb
    inblossom = list(range(nvertex))
    blossomparent = [-1] * nb
    blossomchilds: list[list[int] | None] = [None] * nb
    blossombase = list(range(nvertex)) + [-1] * nvertex
    blossomendps: list[list[int] | None] = [None] * nb
    bestedge = [-1] * nb
    blossombestedges: list[list[int] | None] = [None] * nb
    unusedblossoms = list(range(nvertex, nb))
    dualvar = [maxweight] * nvertex + [0] * nvertex
    allowedge = [False] * nedge
    queue: list[int] = []

    def slack(k: int) -> int:
        i, j = ends[k]
        return dualvar[i] + dualvar[j] - 2 * weights[k]

    def leaves(b: int) -> list[int]:
        if b < nvertex:
            return [b]
        out: list[int] = []
        stack = [b]
        while stack:
            t = stack.pop()
            if t < nvertex:
                out.append(t)
            else:
                stack.extend(blossomchilds[t])  # type: ignore[arg-type]
        return out

    def assign_label(w: int, t: int, p: int) -> None:
        while True:
            b = inblossom[w]
            label[w] = label[b] = t
            labelend[w] = labelend[b] = p
            bestedge[w] = bestedge[b] = -1
            if t == 1:
                queue.extend(leaves(b))
                return
            base = blossombase[b]
            # T-blossom: its base is matched; label the mate S.
            w, t, p = endpoint[mate[base]], 1, mate[base] ^ 1

    def scan_blossom(v: int, w: int) -> int:
        """Trace back from v and w; return the common base or -1."""
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(base: int, k: int) -> None:
        v, w = ends[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        path: list[int] = []
        endps: list[int] = []
        blossomchilds[b] = path
        blossomendps[b] = endps
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        for v in leaves(b):
            if label[inblossom[v]] == 2:
                queue.append(v)
            inblossom[v] = b
        bestedgeto = [-1] * nb
        for bv in path:
            if blossombestedges[bv] is None:
                nblists = [[p // 2 for p in neighbend[u]] for u in leaves(bv)]
            else:
                nblists = [blossombestedges[bv]]  # type: ignore[list-item]
            for nblist in nblists:
                for kk in nblist:
                    i, j = ends[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if (bj != b and label[bj] == 1
                            and (bestedgeto[bj] == -1
                                 or slack(kk) < slack(bestedgeto[bj]))):
                        bestedgeto[bj] = kk
            blossombestedges[bv] = None
            bestedge[bv] = -1
        blossombestedges[b] = [kk for kk in bestedgeto if kk != -1]
        best = -1
        for kk in blossombestedges[b]:  # type: ignore[union-attr]
            if best == -1 or slack(kk) < slack(best):
                best = kk
        bestedge[b] = best

    def expand_blossom(b: int, endstage: bool) -> None:
        childs = blossomchilds[b]
        endps = blossomendps[b]
        assert childs is not None and endps is not None
        for s in childs:
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expand_blossom(s, endstage)
            else:
                for v in leaves(s):
                    inblossom[v] = s
        if not endstage and label[b] == 2:
            # Relabel the children on the even-length path through the blossom.
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = childs.index(entrychild)
            if j & 1:
                j -= len(childs)
                jstep, endptrick = 1, 0
            else:
                jstep, endptrick = -1, 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[endps[j - endptrick] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[endps[j - endptrick] // 2] = True
                j += jstep
                p = endps[j - endptrick] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = childs[j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while childs[j] != entrychild:
                bv = childs[j]
                if label[bv] == 1:
                    j += jstep
                    continue
                hit = -1
                for v in leaves(bv):
                    if label[v] != 0:
                        hit = v
                        break
                if hit != -1:
                    label[hit] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(hit, 2, labelend[hit])
                j += jstep
        label[b] = labelend[b] = -1
        blossomchilds[b] = blossomendps[b] = None
        blossombase[b] = -1
        blossombestedges[b] = None
        bestedge[b] = -1
        unusedblossoms.append(b)

    def augment_blossom(b: int, v: int) -> None:
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= nvertex:
            augment_blossom(t, v)
        childs = blossomchilds[b]
        endps = blossomendps[b]
        assert childs is not None and endps is not None
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            jstep, endptrick = 1, 0
        else:
            jstep, endptrick = -1, 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - endptrick] ^ endptrick
            if t >= nvertex:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = childs[j]
            if t >= nvertex:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        blossomchilds[b] = childs[i:] + childs[:i]
        blossomendps[b] = endps[i:] + endps[:i]
        blossombase[b] = blossombase[blossomchilds[b][0]]  # type: ignore[index]

    def augment_matching(k: int) -> None:
        v, w = ends[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= nvertex:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    for _stage in range(nvertex):
        label[:] = [0] * nb
        bestedge[:] = [-1] * nb
        blossombestedges[nvertex:] = [None] * nvertex
        allowedge[:] = [False] * nedge
        queue.clear()
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)

        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                for p in neighbend[v]:
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        lw = label[inblossom[w]]
                        if lw == 0:
                            assign_label(w, 2, p ^ 1)
                        elif lw == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break

            # No augmenting path under the current duals: pick a dual step.
            deltatype = -1
            delta = 0
            deltaedge = -1
            deltablossom = -1
            if not maxcardinality:
                deltatype = 1
                delta = min(dualvar[:nvertex])
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta, deltatype, deltaedge = d, 2, bestedge[v]
            for b in range(nb):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = slack(bestedge[b]) // 2
                    if deltatype == -1 or d < delta:
                        delta, deltatype, deltaedge = d, 3, bestedge[b]
            for b in range(nvertex, nb):
                if (blossombase[b] >= 0 and blossomparent[b] == -1 and label[b] == 2
                        and (deltatype == -1 or dualvar[b] < delta)):
                    delta, deltatype, deltablossom = dualvar[b], 4, b
            if deltatype == -1:
                # Maximum cardinality reached; final dual step for optimality.
                deltatype = 1
                delta = max(0, min(dualvar[:nvertex]))

            for v in range(nvertex):
                lv = label[inblossom[v]]
                if lv == 1:
                    dualvar[v] -= delta
                elif lv == 2:
                    dualvar[v] += delta
            for b in range(nvertex, nb):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            if deltatype == 2:
                allowedge[deltaedge] = True
                i, j = ends[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                queue.append(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                i, j = ends[deltaedge]
                queue.append(i)
            else:
                expand_blossom(deltablossom, False)

        if not augmented:
            break
        # End of stage: expand S-blossoms whose dual reached zero.
        for b in range(nvertex, nb):
            if (blossomparent[b] == -1 and blossombase[b] >= 0
                    and label[b] == 1 and dualvar[b] == 0):
                expand_blossom(b, True)

    out = [-1] * nvertex
    for v in range(nvertex):
        if mate[v] >= 0:
            out[v] = endpoint[mate[v]]
    for v in range(nvertex):
        if out[v] >= 0 and out[out[v]] != v:
            raise StructuralError("blossom engine produced an inconsistent matching")
    return out
