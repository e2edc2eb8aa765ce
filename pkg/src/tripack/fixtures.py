"""Small hand-built configurations used by tests, demos and the verify suites."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MetricInstance, OrientedCyclePacking, TrianglePacking
from .pack2 import ZCaseFixture, z_case_fixture

__all__ = ["FigureFixture", "figure_fixture", "ZCaseFixture", "z_case_fixture"]

# Three directed cycles on grid points and three triangles across them:
# t1 touches all three cycles, t2 has one edge inside the bottom cycle,
# t3 lies inside the top cycle.
_LEFT = [(0, 0), (0, 1), (0, 2), (0, 3), (-1, 3), (-1, 2), (-1, 1), (-1, 0)]
_TOP = [(2, 3), (3, 3), (4, 3), (5, 3), (5, 4), (5, 5), (4, 5), (3, 5), (2, 5), (2, 4)]
_BOTTOM = [(3, 0), (4, 0), (5, 0), (6, 0), (6, 1), (6, 2), (5, 2), (4, 2), (3, 2), (3, 1)]
_TRIANGLES = {
    "t1": [(0, 1), (2, 3), (3, 1)],
    "t2": [(3, 0), (6, 2), (4, 3)],
    "t3": [(3, 3), (5, 4), (3, 5)],
}


@dataclass(frozen=True)
class FigureFixture:
    inst: MetricInstance
    C: OrientedCyclePacking
    B: TrianglePacking                     # the three triangles only
    names: dict[str, tuple[int, int, int]]
    point: dict[tuple[int, int], int]      # grid point -> vertex id


def figure_fixture() -> FigureFixture:
    """Euclidean distances between the grid points; cycles kept in drawn order."""
    pts = _LEFT + _TOP + _BOTTOM
    ids = {p: i for i, p in enumerate(pts)}
    xy = np.array(pts, dtype=float)
    w = np.sqrt(((xy[:, None, :] - xy[None, :, :]) ** 2).sum(-1))
    inst = MetricInstance(w)
    C = OrientedCyclePacking(tuple(tuple(ids[p] for p in c) for c in (_LEFT, _TOP, _BOTTOM)))
    names = {k: tuple(sorted(ids[p] for p in v)) for k, v in _TRIANGLES.items()}
    B = TrianglePacking.from_vertex_sets([names[k] for k in ("t1", "t2", "t3")], inst)
    return FigureFixture(inst, C, B, names, ids)  # type: ignore[arg-type]
