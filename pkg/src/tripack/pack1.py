"""
First triangle packing: best partial packing inside the short cycles.

A partial packing is a set of vertex-disjoint triangle- and edge-components,
each internal to one cycle, at most ``budget`` of them in total.  Its
augmented weight counts triangles once and edges twice; completing each
edge with any unused vertex recovers at least that weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .completion import complete_packing
from .core import MetricInstance, OrientedCyclePacking, StructuralError, TrianglePacking

NEG = float("-inf")


@dataclass(frozen=True)
class PartialPacking:
    triangle_components: tuple[tuple[int, int, int], ...]
    edge_components: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.triangle_components) + len(self.edge_components)

    def augmented_weight(self, inst: MetricInstance) -> float:
        w = inst.w
        return (sum(inst.triangle_weight(*t) for t in self.triangle_components)
                + sum(2.0 * w[a, b] for a, b in self.edge_components))


def cycle_table(vertices: tuple[int, ...], inst: MetricInstance):
    """Subset DP over one cycle's vertices.

    Returns ``(best, choose)`` where ``best(mask)[c]`` is the maximum
    augmented weight of exactly ``c`` components using only vertices in
    ``mask`` (bit i = ``vertices[i]``), and ``choose`` reconstructs it.
    """
    k = len(vertices)
    w = inst.w
    cmax = k // 2
    pw = [[2.0 * float(w[vertices[i], vertices[j]]) for j in range(k)] for i in range(k)]
    tw = [[float(w[vertices[i], vertices[j]]) for j in range(k)] for i in range(k)]

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[float, ...]:
        if mask == 0:
            return (0.0,) + (NEG,) * cmax
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        out = list(best(rest))                      # low stays unused
        others = [j for j in range(low + 1, k) if rest >> j & 1]
        for a, j in enumerate(others):
            sub = best(rest & ~(1 << j))
            gain = pw[low][j]
            for c in range(cmax):
                if sub[c] != NEG and sub[c] + gain > out[c + 1]:
                    out[c + 1] = sub[c] + gain
            for l in others[a + 1:]:
                sub = best(rest & ~(1 << j) & ~(1 << l))
                gain = tw[low][j] + tw[low][l] + tw[j][l]
                for c in range(cmax):
                    if sub[c] != NEG and sub[c] + gain > out[c + 1]:
                        out[c + 1] = sub[c] + gain
        return tuple(out)

    def choose(mask: int, c: int) -> list[tuple[int, ...]]:
        comps: list[tuple[int, ...]] = []
        while mask and c > 0:
            target = best(mask)[c]
            low = (mask & -mask).bit_length() - 1
            rest = mask & ~(1 << low)
            if best(rest)[c] == target:
                mask = rest
                continue
            others = [j for j in range(low + 1, k) if rest >> j & 1]
            found = False
            for a, j in enumerate(others):
                m2 = rest & ~(1 << j)
                if best(m2)[c - 1] + pw[low][j] == target:
                    comps.append((vertices[low], vertices[j]))
                    mask, c, found = m2, c - 1, True
                    break
                for l in others[a + 1:]:
                    m3 = m2 & ~(1 << l)
                    gain = tw[low][j] + tw[low][l] + tw[j][l]
                    if best(m3)[c - 1] + gain == target:
                        comps.append((vertices[low], vertices[j], vertices[l]))
                        mask, c, found = m3, c - 1, True
                        break
                if found:
                    break
            if not found:
                raise StructuralError("partial packing reconstruction failed")
        return comps

    return best, choose


def best_partial_packing(C: OrientedCyclePacking, inst: MetricInstance,
                         budget: int | None = None,
                         max_len: int = 20) -> PartialPacking:
    """Maximum augmented weight partial packing with at most ``budget`` components.

    Chords count as internal edges.  Per-cycle tables (exactly ``c``
    components) are merged by a knapsack over the component budget.
    """
    if budget is None:
        budget = inst.n // 3
    for cyc in C.cycles:
        if len(cyc) > max_len:
            raise ValueError(f"cycle of length {len(cyc)} exceeds max_len={max_len}")
    tables = []
    for cyc in C.cycles:
        best, choose = cycle_table(tuple(cyc), inst)
        full = (1 << len(cyc)) - 1
        tables.append((best(full), choose, full))

    # knapsack: acc[b] = best total with exactly b components so far
    acc = [0.0] + [NEG] * budget
    picks: list[list[int]] = []
    for f, _, _ in tables:
        nxt = [NEG] * (budget + 1)
        arg = [-1] * (budget + 1)
        for b in range(budget + 1):
            if acc[b] == NEG:
                continue
            for c in range(len(f)):
                if b + c > budget:
                    break
                if f[c] != NEG and acc[b] + f[c] > nxt[b + c]:
                    nxt[b + c] = acc[b] + f[c]
                    arg[b + c] = c
        acc = nxt
        picks.append(arg)
    b = max(range(budget + 1), key=lambda i: (acc[i], -i))
    counts = [0] * len(tables)
    for idx in range(len(tables) - 1, -1, -1):
        c = picks[idx][b]
        counts[idx] = c
        b -= c
    tris: list[tuple[int, int, int]] = []
    edges: list[tuple[int, int]] = []
    for (f, choose, full), c in zip(tables, counts):
        for comp in choose(full, c):
            s = tuple(sorted(comp))
            if len(s) == 3:
                tris.append(s)  # type: ignore[arg-type]
            else:
                edges.append(s)  # type: ignore[arg-type]
    return PartialPacking(tuple(sorted(tris)), tuple(sorted(edges)))


def complete_partial(P: PartialPacking, inst: MetricInstance) -> TrianglePacking:
    """Turn a partial packing into a perfect one weighing at least its augmented weight."""
    if len(P) > inst.n // 3:
        raise ValueError(f"{len(P)} components exceed the budget n/3 = {inst.n // 3}")
    return complete_packing(inst, P.triangle_components, P.edge_components)


def build_t1(C: OrientedCyclePacking, inst: MetricInstance,
             max_len: int = 20) -> tuple[TrianglePacking, PartialPacking]:
    P = best_partial_packing(C, inst, inst.n // 3, max_len)
    return complete_partial(P, inst), P
