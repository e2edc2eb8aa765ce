"""Frozen values, each computed once by an independent brute-force enumerator."""

from __future__ import annotations

import pytest

from tripack.core import gen_euclidean, gen_graph_metric
from tripack.exact import exact_triangle_packing
from tripack.solver import solve

EUCLID_12_7_OPT = 8.284590666943858
GRAPH_9_05_3_OPT = 5.998844634766338
EUCLID_12_7_RATIO = 0.9841226475444221


def test_euclid_12_7_optimum():
    opt = exact_triangle_packing(gen_euclidean(12, 7))
    assert opt.weight == pytest.approx(EUCLID_12_7_OPT, rel=1e-12)
    assert opt.count == 15400
    assert list(opt.packing.vertex_sets()) == [(0, 1, 6), (2, 4, 5), (3, 8, 11), (7, 9, 10)]


def test_graph_9_05_3_optimum():
    opt = exact_triangle_packing(gen_graph_metric(9, 0.5, 3))
    assert opt.weight == pytest.approx(GRAPH_9_05_3_OPT, rel=1e-12)
    assert opt.count == 280


def test_euclid_12_7_pipeline_ratio():
    r = solve(gen_euclidean(12, 7), exact=True).report
    assert r.w_Bstar == pytest.approx(EUCLID_12_7_OPT, rel=1e-12)
    assert r.ratio >= 0.66835 - 0.2
    assert r.ratio == pytest.approx(EUCLID_12_7_RATIO, rel=1e-12)
    assert r.extra["best"] == "T1"
