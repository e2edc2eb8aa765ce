from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripack.classify import Category, classify, is_type1, parameters, type_split
from tripack.core import (MetricInstance, OrientedCyclePacking, TrianglePacking,
                          gen_euclidean, gen_graph_metric)
from tripack.cyclepack import max_weight_cycle_packing, split_to_short
from tripack.exact import exact_triangle_packing
from tripack.fixtures import figure_fixture


def test_figure_categories_and_out_edges():
    fx = figure_fixture()
    by = {c.triangle.vertices: c for c in classify(fx.B, fx.C)}
    t1, t2, t3 = (by[fx.names[k]] for k in ("t1", "t2", "t3"))
    assert t1.category is Category.EXTERNAL and len(t1.out_edges) == 3
    assert t2.category is Category.PARTIAL_EXTERNAL
    p = fx.point
    assert t2.out_edges == ((p[(4, 3)], p[(5, 3)]),)
    assert t3.category is Category.INTERNAL and t3.out_edges == ()
    for x, y in t1.out_edges:
        ci, pos = fx.C.cycle_index()[x]
        cyc = fx.C.cycles[ci]
        assert cyc[(pos + 1) % len(cyc)] == y


def three_by_three(cross: float, inside: float) -> tuple[MetricInstance, OrientedCyclePacking, TrianglePacking]:
    w = np.full((9, 9), cross)
    for c in range(3):
        for i in range(3):
            for j in range(3):
                w[3 * c + i, 3 * c + j] = inside
    np.fill_diagonal(w, 0.0)
    inst = MetricInstance(w)
    C = OrientedCyclePacking(((0, 1, 2), (3, 4, 5), (6, 7, 8)))
    B = TrianglePacking.from_vertex_sets([(0, 3, 6), (1, 4, 7), (2, 5, 8)], inst)
    return inst, C, B


def test_type_boundary_is_strict():
    inst, C, B = three_by_three(1.0, 1.5)
    classes = classify(B, C)
    assert all(c.category is Category.EXTERNAL for c in classes)
    # out-edges weigh 1.5 = (1 - 0)/2 * 3 exactly: not strictly heavier
    assert all(c.type == 2 for c in type_split(classes, inst, 0.0))
    assert all(c.type == 1 for c in type_split(classes, inst, 0.01))
    assert [c.klass for c in type_split(classes, inst, 0.0)] == [5, 5, 5]
    assert not is_type1(classes[0], inst, 0.0)


def test_tau_range_checked():
    inst, C, B = three_by_three(1.0, 1.5)
    with pytest.raises(ValueError):
        type_split(classify(B, C), inst, 0.5)


def test_klass_needs_type():
    inst, C, B = three_by_three(1.0, 1.5)
    with pytest.raises(ValueError):
        classify(B, C)[0].klass


@given(st.integers(0, 10**6), st.sampled_from([6, 9, 12]), st.sampled_from([0.0, 0.25, 1 / 3]))
@settings(max_examples=25, deadline=None)
def test_parameter_invariants(seed, n, tau):
    inst = gen_euclidean(n, seed) if seed % 2 else gen_graph_metric(n, 0.4, seed)
    B = exact_triangle_packing(inst).packing
    C = split_to_short(max_weight_cycle_packing(inst), inst, 0.2)
    p = parameters(B, C, tau, inst)
    assert sum(p.alpha[1:]) == pytest.approx(1.0)
    for i in range(1, 6):
        assert p.rho[i] + p.sigma[i] + p.theta[i] == pytest.approx(p.alpha[i], abs=1e-12)
        assert p.rho[i] <= p.sigma[i] + 1e-12 and p.sigma[i] <= p.theta[i] + 1e-12
        assert p.rho[i] + p.sigma[i] >= p.theta[i] - 1e-12
        assert 0 <= p.u[i] <= p.v[i] + 1e-12 <= 1 + 2e-12
    assert sum(p.weight[1:]) == pytest.approx(p.total)
    assert all(1 <= c.klass <= 5 for c in p.classes)
