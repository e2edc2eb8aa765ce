"""Greedy completion of edges and leftover vertices into a perfect packing."""

from __future__ import annotations

from typing import Iterable, Sequence

from .core import Edge, MetricInstance, StructuralError, TrianglePacking


def complete_packing(inst: MetricInstance,
                     triangles: Iterable[Sequence[int]],
                     edges: Iterable[Edge]) -> TrianglePacking:
    """Keep ``triangles``; close each edge with its best unused vertex; group the rest.

    Edges are processed in lexicographic order.  Each takes the unused vertex
    maximising ``w(xz) + w(yz)`` (smallest id on ties), so every completed
    triangle weighs at least twice its edge.  Leftover vertices are grouped
    by repeatedly taking the lowest one with its best pair.
    """
    n = inst.n
    w = inst.w
    tris = [tuple(sorted(t)) for t in triangles]
    edge_list = sorted(tuple(sorted(e)) for e in edges)
    used = [False] * n
    for grp in list(tris) + edge_list:
        for v in grp:
            if used[v]:
                raise StructuralError(f"vertex {v} used twice")
            used[v] = True
    free = [v for v in range(n) if not used[v]]
    if len(free) < len(edge_list):
        raise StructuralError(
            f"{len(edge_list)} edge components but only {len(free)} unused vertices")
    free_set = set(free)
    for x, y in edge_list:
        z = max(sorted(free_set), key=lambda c: (w[x, c] + w[y, c], -c))
        free_set.remove(z)
        tris.append((x, y, z))
    rest = sorted(free_set)
    if len(rest) % 3:
        raise StructuralError(f"{len(rest)} leftover vertices cannot form triangles")
    while rest:
        a = rest[0]
        best, pick = -1.0, (0, 0)
        for i in range(1, len(rest)):
            b = rest[i]
            for j in range(i + 1, len(rest)):
                c = rest[j]
                val = w[a, b] + w[a, c] + w[b, c]
                if val > best:
                    best, pick = val, (i, j)
        i, j = pick
        tris.append((a, rest[i], rest[j]))
        rest = [v for k, v in enumerate(rest) if k not in (0, i, j)]
    return TrianglePacking.from_vertex_sets(tris, inst)
