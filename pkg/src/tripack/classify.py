"""
Taxonomy of a reference triangle packing against an oriented cycle packing.

An edge is *internal* when both endpoints lie on the same cycle.  A triangle
with three internal edges is internal, with one internal edge
partial-external, with none external.  An *external vertex* of a triangle
is incident to its two external edges; the cycle edge leaving it (in the
cycle's direction) is an *out-edge* of the triangle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import (MetricInstance, OrientedCyclePacking, StructuralError,
                   Triangle, TrianglePacking)


class Category(str, Enum):
    INTERNAL = "internal"
    PARTIAL_EXTERNAL = "partial_external"
    EXTERNAL = "external"


@dataclass(frozen=True)
class TriangleClass:
    triangle: Triangle
    category: Category
    out_edges: tuple[tuple[int, int], ...]   # directed (x, x')
    type: int | None = None                  # 1, 2, or None for internal

    @property
    def klass(self) -> int:
        """Index 1..5 of the five-way split."""
        if self.category is Category.INTERNAL:
            return 1
        if self.type is None:
            raise ValueError("type not assigned; run type_split first")
        base = 2 if self.category is Category.PARTIAL_EXTERNAL else 4
        return base + (self.type - 1)


def classify(B: TrianglePacking, C: OrientedCyclePacking) -> list[TriangleClass]:
    """Category and out-edges of every triangle of ``B`` (types left unset)."""
    where = C.cycle_index()
    out = []
    for t in B.triangles:
        for v in t.vertices:
            if v not in where:
                raise ValueError(f"vertex {v} of {t.vertices} not covered by the cycles")
        x, y, z = t.vertices
        cyc = {v: where[v][0] for v in t.vertices}
        internal = [cyc[a] == cyc[b] for a, b in ((x, y), (x, z), (y, z))]
        count = sum(internal)
        if count == 2:
            raise StructuralError(f"triangle {t.vertices} has exactly two internal edges")
        if count == 3:
            out.append(TriangleClass(t, Category.INTERNAL, ()))
            continue
        outs = []
        for v in t.vertices:
            others = [u for u in t.vertices if u != v]
            if all(cyc[u] != cyc[v] for u in others):
                ci, pos = where[v]
                c = C.cycles[ci]
                outs.append((v, c[(pos + 1) % len(c)]))
        cat = Category.PARTIAL_EXTERNAL if count == 1 else Category.EXTERNAL
        expected = 1 if count == 1 else 3
        if len(outs) != expected:
            raise StructuralError(f"triangle {t.vertices}: {len(outs)} out-edges")
        out.append(TriangleClass(t, cat, tuple(outs)))
    return out


def is_type1(cls: TriangleClass, inst: MetricInstance, tau: float) -> bool:
    wt = cls.triangle.weight(inst)
    thresh = 0.5 * (1.0 - tau) * wt
    return all(inst.w[x, y] > thresh for x, y in cls.out_edges)


def type_split(classes: list[TriangleClass], inst: MetricInstance,
               tau: float) -> list[TriangleClass]:
    """Type-1 iff every out-edge is strictly heavier than (1-tau)/2 * w(t)."""
    _check_tau(tau)
    out = []
    for c in classes:
        if c.category is Category.INTERNAL:
            out.append(c)
        else:
            t = 1 if is_type1(c, inst, tau) else 2
            out.append(TriangleClass(c.triangle, c.category, c.out_edges, t))
    return out


def _check_tau(tau: float) -> None:
    if not 0.0 <= tau <= 1.0 / 3.0 + 1e-15:
        raise ValueError(f"tau must lie in [0, 1/3], got {tau}")


@dataclass(frozen=True)
class ClassParameters:
    """Per-class ratios and weight fractions, indexed 1..5 (index 0 unused).

    ``alpha[i]`` is class i's share of ``w(B)``; ``rho``, ``sigma``,
    ``theta`` the shares contributed by the light, middle and heavy edges;
    ``u = rho/theta`` and ``v = sigma/theta``.
    """

    u: tuple[float, ...]
    v: tuple[float, ...]
    alpha: tuple[float, ...]
    rho: tuple[float, ...]
    sigma: tuple[float, ...]
    theta: tuple[float, ...]
    weight: tuple[float, ...]     # w(B_i)
    total: float                  # w(B)
    classes: tuple[TriangleClass, ...]


def parameters(B: TrianglePacking, C: OrientedCyclePacking, tau: float,
               inst: MetricInstance) -> ClassParameters:
    classes = type_split(classify(B, C), inst, tau)
    w = inst.w
    sa = [0.0] * 6
    sb = [0.0] * 6
    sc = [0.0] * 6
    cnt = [0] * 6
    for c in classes:
        t = c.triangle
        i = c.klass
        cnt[i] += 1
        sa[i] += float(w[t.a])
        sb[i] += float(w[t.b])
        sc[i] += float(w[t.c])
    weight = [sa[i] + sb[i] + sc[i] for i in range(6)]
    total = sum(weight[1:])
    ntri = max(1, sum(cnt))
    u = [1.0] * 6
    v = [1.0] * 6
    alpha = [0.0] * 6
    rho = [0.0] * 6
    sigma = [0.0] * 6
    theta = [0.0] * 6
    for i in range(1, 6):
        # zero total weight: fall back to triangle counts for the shares
        alpha[i] = weight[i] / total if total > 0 else cnt[i] / ntri
        if cnt[i] and sc[i] > 0:
            u[i] = sa[i] / sc[i]
            v[i] = sb[i] / sc[i]
            rho[i] = sa[i] / total
            sigma[i] = sb[i] / total
            theta[i] = sc[i] / total
        else:
            rho[i] = sigma[i] = theta[i] = alpha[i] / 3.0
    return ClassParameters(tuple(u), tuple(v), tuple(alpha), tuple(rho),
                           tuple(sigma), tuple(theta), tuple(weight), total,
                           tuple(classes))
