"""
Metric instances, packing types, instance I/O and generators.

Vertices are dense 0-based integers.  Edges are stored as sorted pairs
``(i, j)`` with ``i < j``; every "arbitrary" choice made downstream is
resolved lexicographically on these tuples.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

Edge = tuple[int, int]

#: Relative tolerance for every weight comparison (scaled by max weight).
REL_TOL = 1e-9


class InstanceFormatError(ValueError):
    """Raised when an instance file cannot be parsed."""


class MetricViolationError(ValueError):
    """Raised when a weight matrix breaks symmetry or the triangle inequality."""

    def __init__(self, report: "MetricReport"):
        self.report = report
        super().__init__(report.describe())


class StructuralError(RuntimeError):
    """An internal invariant of the algorithm was violated.

    This signals corrupted inputs or a bug, never a user error.
    """


def edge(u: int, v: int) -> Edge:
    """Return the canonical (sorted) form of the undirected edge uv."""
    if u == v:
        raise ValueError(f"self-loop on vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """Complete graph on ``n`` vertices with a symmetric weight matrix."""

    w: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.w, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def tol(self) -> float:
        """Absolute comparison tolerance, ``REL_TOL * max(w)``."""
        return REL_TOL * float(self.w.max(initial=0.0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MetricInstance):
            return NotImplemented
        return np.array_equal(self.w, other.w)

    def __hash__(self) -> int:
        return hash(self.w.tobytes())

    def weight(self, u: int, v: int) -> float:
        return float(self.w[u, v])

    def triangle_weight(self, u: int, v: int, x: int) -> float:
        w = self.w
        return float(w[u, v] + w[u, x] + w[v, x])


@dataclass(frozen=True)
class Triangle:
    """A triangle with its edges ordered as ``w(a) <= w(b) <= w(c)``.

    Ties in weight are broken by the lexicographic order of the edges.
    """

    vertices: tuple[int, int, int]
    a: Edge
    b: Edge
    c: Edge

    @classmethod
    def of(cls, vertices: Iterable[int], inst: MetricInstance) -> "Triangle":
        vs = tuple(sorted(vertices))
        if len(vs) != 3 or len(set(vs)) != 3:
            raise ValueError(f"triangle needs three distinct vertices, got {vs}")
        x, y, z = vs
        edges = sorted([(x, y), (x, z), (y, z)],
                       key=lambda e: (inst.w[e[0], e[1]], e))
        return cls(vs, edges[0], edges[1], edges[2])  # type: ignore[arg-type]

    @property
    def edges(self) -> tuple[Edge, Edge, Edge]:
        x, y, z = self.vertices
        return ((x, y), (x, z), (y, z))

    def weight(self, inst: MetricInstance) -> float:
        return inst.triangle_weight(*self.vertices)


@dataclass(frozen=True)
class TrianglePacking:
    triangles: tuple[Triangle, ...]

    @classmethod
    def from_vertex_sets(cls, groups: Iterable[Iterable[int]],
                         inst: MetricInstance) -> "TrianglePacking":
        tris = sorted((Triangle.of(g, inst) for g in groups),
                      key=lambda t: t.vertices)
        return cls(tuple(tris))

    def vertex_sets(self) -> list[tuple[int, int, int]]:
        return [t.vertices for t in self.triangles]

    def is_perfect(self, n: int) -> bool:
        seen = [v for t in self.triangles for v in t.vertices]
        return len(seen) == n and sorted(seen) == list(range(n))

    def edges(self) -> list[Edge]:
        return [e for t in self.triangles for e in t.edges]


@dataclass(frozen=True)
class Matching:
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        es = tuple(sorted(edge(u, v) for u, v in self.edges))
        object.__setattr__(self, "edges", es)
        verts = [v for e in es for v in e]
        if len(verts) != len(set(verts)):
            raise StructuralError(f"edges are not vertex-disjoint: {es}")

    def __len__(self) -> int:
        return len(self.edges)

    def vertices(self) -> set[int]:
        return {v for e in self.edges for v in e}


@dataclass(frozen=True)
class OrientedCyclePacking:
    """Vertex-disjoint directed cycles; ``cycles[i][j] -> cycles[i][j+1]``."""

    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        cs = tuple(tuple(int(v) for v in c) for c in self.cycles)
        object.__setattr__(self, "cycles", cs)
        for c in cs:
            if len(c) < 3:
                raise StructuralError(f"cycle shorter than 3: {c}")
        verts = [v for c in cs for v in c]
        if len(verts) != len(set(verts)):
            raise StructuralError("cycles are not vertex-disjoint")

    def vertices(self) -> set[int]:
        return {v for c in self.cycles for v in c}

    def covers(self, n: int) -> bool:
        return sorted(v for c in self.cycles for v in c) == list(range(n))

    def directed_edges(self) -> list[tuple[int, int]]:
        return [(c[i], c[(i + 1) % len(c)])
                for c in self.cycles for i in range(len(c))]

    def edges(self) -> list[Edge]:
        return [edge(u, v) for u, v in self.directed_edges()]

    def cycle_index(self) -> dict[int, tuple[int, int]]:
        """Map each vertex to ``(cycle number, position in cycle)``."""
        return {v: (ci, pos) for ci, c in enumerate(self.cycles)
                for pos, v in enumerate(c)}


Weighted = Union[TrianglePacking, Matching, OrientedCyclePacking]


def packing_weight(obj: Weighted | Iterable[Edge], inst: MetricInstance) -> float:
    """Total edge weight; each triangle contributes its three edges."""
    if isinstance(obj, (TrianglePacking, Matching, OrientedCyclePacking)):
        edges = obj.edges() if callable(obj.edges) else obj.edges
    else:
        edges = list(obj)
    if not edges:
        return 0.0
    idx = np.asarray(edges, dtype=int)
    return float(inst.w[idx[:, 0], idx[:, 1]].sum())


# ----------------------------------------------------------------------
# Metric checking

@dataclass(frozen=True)
class MetricReport:
    ok: bool
    tol: float
    kind: str = ""
    # (i, j, k) with w(i,j) > w(i,k) + w(k,j) for triangle violations,
    # (i, j, -1) for symmetry / sign / diagonal problems.
    triple: tuple[int, int, int] | None = None
    excess: float = 0.0

    def describe(self) -> str:
        if self.ok:
            return "metric ok"
        i, j, k = self.triple  # type: ignore[misc]
        if self.kind == "triangle":
            return (f"triangle inequality violated on triple ({i}, {j}, {k}): "
                    f"w({i},{j}) exceeds w({i},{k}) + w({k},{j}) by {self.excess:.6g}")
        return f"{self.kind} violated at ({i}, {j}) by {self.excess:.6g}"

    def __bool__(self) -> bool:
        return self.ok


def check_metric(inst: MetricInstance, tol: float | None = None) -> MetricReport:
    """Check symmetry, nonnegativity, zero diagonal and the triangle inequality.

    Returns a report whose ``triple`` names the worst offender.  ``tol``
    defaults to ``REL_TOL * max(w)``.
    """
    w = inst.w
    n = inst.n
    if tol is None:
        tol = inst.tol
    if n == 0:
        return MetricReport(True, tol)
    diag = np.abs(np.diag(w))
    if diag.max() > tol:
        i = int(diag.argmax())
        return MetricReport(False, tol, "zero diagonal", (i, i, -1), float(diag[i]))
    asym = np.abs(w - w.T)
    if asym.max() > tol:
        i, j = np.unravel_index(int(asym.argmax()), asym.shape)
        return MetricReport(False, tol, "symmetry", (int(min(i, j)), int(max(i, j)), -1),
                            float(asym[i, j]))
    if w.min() < -tol:
        i, j = np.unravel_index(int(w.argmin()), w.shape)
        return MetricReport(False, tol, "nonnegativity", (int(i), int(j), -1),
                            float(-w[i, j]))
    worst, where = 0.0, None
    for k in range(n):
        # excess[i, j] = w(i,j) - w(i,k) - w(k,j)
        excess = w - (w[:, k, None] + w[None, k, :])
        excess[k, :] = -np.inf
        excess[:, k] = -np.inf
        np.fill_diagonal(excess, -np.inf)
        flat = int(excess.argmax())
        val = float(excess.flat[flat])
        if val > worst:
            i, j = divmod(flat, n)
            worst, where = val, (min(i, j), max(i, j), k)
    if worst > tol:
        return MetricReport(False, tol, "triangle", where, worst)
    return MetricReport(True, tol)


# ----------------------------------------------------------------------
# I/O

def save_instance(inst: MetricInstance, path: str | Path) -> None:
    """Write ``inst`` in the text format read by `load_instance`.

    Weights are written with ``repr`` so that a reload is bit-identical.
    """
    n = inst.n
    lines = [f"n {n}"]
    for i in range(n):
        for j in range(i + 1, n):
            lines.append(f"{i} {j} {float(inst.w[i, j])!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_instance(path: str | Path, *, check: bool = True) -> MetricInstance:
    """Read an instance file: ``n <count>`` then one ``i j w`` line per pair.

    Raises `InstanceFormatError` on malformed input and
    `MetricViolationError` when the weights are not a semi-metric.
    Warns (but accepts) when ``n`` is not a multiple of three.
    """
    text = Path(path).read_text().split("\n")
    rows = [ln.split() for ln in text if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2 or rows[0][0] != "n":
        raise InstanceFormatError(f"{path}: first line must be 'n <count>'")
    try:
        n = int(rows[0][1])
    except ValueError as exc:
        raise InstanceFormatError(f"{path}: bad vertex count {rows[0][1]!r}") from exc
    if n < 1:
        raise InstanceFormatError(f"{path}: vertex count must be positive")
    expected = n * (n - 1) // 2
    if len(rows) - 1 != expected:
        raise InstanceFormatError(
            f"{path}: expected {expected} edge lines, found {len(rows) - 1}")
    w = np.zeros((n, n))
    seen = np.zeros((n, n), dtype=bool)
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise InstanceFormatError(f"{path}:{lineno}: expected 'i j w'")
        try:
            i, j, wt = int(row[0]), int(row[1]), float(row[2])
        except ValueError as exc:
            raise InstanceFormatError(f"{path}:{lineno}: {exc}") from exc
        if not (0 <= i < j < n):
            raise InstanceFormatError(f"{path}:{lineno}: need 0 <= i < j < n")
        if seen[i, j]:
            raise InstanceFormatError(f"{path}:{lineno}: duplicate pair ({i}, {j})")
        if not math.isfinite(wt):
            raise InstanceFormatError(f"{path}:{lineno}: non-finite weight")
        seen[i, j] = True
        w[i, j] = w[j, i] = wt
    inst = MetricInstance(w)
    if check:
        report = check_metric(inst)
        if not report.ok:
            raise MetricViolationError(report)
    if n % 3:
        warnings.warn(f"{path}: n={n} is not a multiple of 3; "
                      "only oracle use is meaningful", stacklevel=2)
    return inst


# ----------------------------------------------------------------------
# Generators

def gen_euclidean(n: int, seed: int) -> MetricInstance:
    """Euclidean distances between ``n`` uniform points in the unit square."""
    if n < 3:
        raise ValueError("need n >= 3")
    pts = np.random.default_rng(seed).random((n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    w = np.sqrt((diff ** 2).sum(axis=-1))
    np.fill_diagonal(w, 0.0)
    return MetricInstance(w)


def shortest_path_closure(w: np.ndarray) -> np.ndarray:
    """Floyd-Warshall on a dense matrix (``inf`` marks a missing edge)."""
    d = np.array(w, dtype=float)
    np.fill_diagonal(d, 0.0)
    for k in range(d.shape[0]):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def gen_graph_metric(n: int, density: float, seed: int) -> MetricInstance:
    """Shortest-path metric of a random connected graph.

    A random spanning tree is laid down first, then random extra edges until
    ``ceil(density * n(n-1)/2)`` edges exist.  Weights are uniform in [0, 1].
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    m = max(n - 1, math.ceil(density * total))
    g = np.full((n, n), np.inf)
    order = rng.permutation(n)
    chosen: set[Edge] = set()
    for idx in range(1, n):
        parent = order[rng.integers(idx)]
        chosen.add(edge(int(order[idx]), int(parent)))
    rest = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in chosen]
    extra = m - len(chosen)
    if extra > 0:
        pick = rng.choice(len(rest), size=extra, replace=False)
        chosen.update(rest[int(p)] for p in pick)
    for i, j in sorted(chosen):
        g[i, j] = g[j, i] = rng.random()
    return MetricInstance(shortest_path_closure(g))


def uniform_instance(n: int, value: float = 1.0) -> MetricInstance:
    w = np.full((n, n), float(value))
    np.fill_diagonal(w, 0.0)
    return MetricInstance(w)


# ----------------------------------------------------------------------
# Reports

REPORT_FIELDS = ("n", "eps", "tau", "seed", "w_Cstar", "w_C", "w_T1", "w_T2",
                 "w_T3", "w_best", "w_Bstar", "ratio")


@dataclass
class Report:
    """Result record of one pipeline run."""

    n: int
    eps: float
    tau: float
    seed: int | None
    w_Cstar: float
    w_C: float
    w_T1: float
    w_T2: float
    w_T3: float
    w_best: float
    w_Bstar: float | None = None
    ratio: float | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in REPORT_FIELDS}
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        d = self.as_dict()
        width = max(len(k) for k in d)
        out = []
        for k, v in d.items():
            if v is None:
                continue
            if isinstance(v, float):
                v = repr(v)
            out.append(f"{k:<{width}} = {v}")
        return "\n".join(out) + "\n"


def sorted_edges(pairs: Iterable[Sequence[int]]) -> list[Edge]:
    return sorted(edge(int(p[0]), int(p[1])) for p in pairs)
