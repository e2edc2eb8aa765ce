from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripack.core import (InstanceFormatError, Matching, MetricInstance,
                          MetricViolationError, OrientedCyclePacking, Report,
                          StructuralError, Triangle, TrianglePacking, check_metric,
                          edge, gen_euclidean, gen_graph_metric, load_instance,
                          packing_weight, save_instance, shortest_path_closure,
                          uniform_instance)


def write(tmp_path, text):
    p = tmp_path / "inst.txt"
    p.write_text(text)
    return p


def test_load_uniform_triangle(tmp_path):
    inst = load_instance(write(tmp_path, "n 3\n0 1 1\n0 2 1\n1 2 1\n"))
    assert inst.n == 3
    assert inst == uniform_instance(3)


def test_load_reports_worst_violating_triple(tmp_path):
    with pytest.raises(MetricViolationError) as err:
        load_instance(write(tmp_path, "n 3\n0 1 10\n0 2 1\n1 2 1\n"))
    rep = err.value.report
    assert rep.kind == "triangle"
    assert rep.triple == (0, 1, 2)
    assert rep.excess == pytest.approx(8.0)
    assert "(0, 1, 2)" in rep.describe()


@pytest.mark.parametrize("text", [
    "",
    "m 3\n",
    "n x\n",
    "n 3\n0 1 1\n0 2 1\n",
    "n 3\n0 1 1\n0 2 1\n2 1 1\n",
    "n 3\n0 1 1\n0 1 1\n1 2 1\n",
    "n 3\n0 1 1\n0 2 nan\n1 2 1\n",
    "n 3\n0 1\n0 2 1\n1 2 1\n",
])
def test_load_rejects_malformed(tmp_path, text):
    with pytest.raises(InstanceFormatError):
        load_instance(write(tmp_path, text))


def test_load_warns_when_not_divisible(tmp_path):
    with pytest.warns(UserWarning):
        inst = load_instance(write(tmp_path, "n 2\n0 1 1\n"))
    assert inst.n == 2


def test_round_trip_is_bit_identical(tmp_path):
    inst = gen_euclidean(12, 3)
    p = tmp_path / "e.txt"
    save_instance(inst, p)
    again = load_instance(p)
    assert again.w.tobytes() == inst.w.tobytes()


def test_instance_is_read_only():
    inst = uniform_instance(3)
    with pytest.raises(ValueError):
        inst.w[0, 1] = 5.0


@pytest.mark.parametrize("mat,kind", [
    ([[1, 1, 1], [1, 0, 1], [1, 1, 0]], "zero diagonal"),
    ([[0, 1, 1], [2, 0, 1], [1, 1, 0]], "symmetry"),
    ([[0, -1, 1], [-1, 0, 1], [1, 1, 0]], "nonnegativity"),
])
def test_check_metric_kinds(mat, kind):
    rep = check_metric(MetricInstance(np.array(mat, dtype=float)))
    assert not rep.ok and rep.kind == kind


def test_check_metric_tolerance_boundary():
    w = np.array([[0, 2 + 1e-12, 1], [2 + 1e-12, 0, 1], [1, 1, 0]])
    assert check_metric(MetricInstance(w)).ok


@given(st.integers(3, 15), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_generators_are_metric_and_pure(n, seed):
    for gen in (lambda: gen_euclidean(n, seed), lambda: gen_graph_metric(n, 0.5, seed)):
        a, b = gen(), gen()
        assert a == b
        assert check_metric(a).ok
        assert np.allclose(a.w, a.w.T) and np.all(np.diag(a.w) == 0)


def test_graph_metric_is_a_closure_fixed_point():
    inst = gen_graph_metric(12, 1.0, 5)
    assert np.array_equal(shortest_path_closure(inst.w), inst.w)
    sparse = gen_graph_metric(12, 0.05, 5)
    assert np.isfinite(sparse.w).all()


def test_generator_rejects_bad_parameters():
    with pytest.raises(ValueError):
        gen_graph_metric(9, 0.0, 1)
    with pytest.raises(ValueError):
        gen_euclidean(2, 1)


def test_triangle_roles_ordered_with_lexicographic_ties():
    inst = uniform_instance(3)
    t = Triangle.of((2, 0, 1), inst)
    assert t.vertices == (0, 1, 2)
    assert (t.a, t.b, t.c) == ((0, 1), (0, 2), (1, 2))
    w = np.array([[0, 3, 1], [3, 0, 2], [1, 2, 0]], dtype=float)
    t = Triangle.of((0, 1, 2), MetricInstance(w))
    assert (t.a, t.b, t.c) == ((0, 2), (1, 2), (0, 1))
    with pytest.raises(ValueError):
        Triangle.of((0, 0, 1), inst)


def test_matching_and_cycles_validate():
    with pytest.raises(StructuralError):
        Matching(((0, 1), (1, 2)))
    assert Matching(((3, 2), (0, 1))).edges == ((0, 1), (2, 3))
    with pytest.raises(StructuralError):
        OrientedCyclePacking(((0, 1),))
    with pytest.raises(StructuralError):
        OrientedCyclePacking(((0, 1, 2), (2, 3, 4)))
    with pytest.raises(ValueError):
        edge(1, 1)


def test_packing_weight_is_additive():
    inst = gen_euclidean(9, 1)
    P = TrianglePacking.from_vertex_sets([(0, 1, 2), (3, 4, 5), (6, 7, 8)], inst)
    assert P.is_perfect(9)
    parts = sum(packing_weight(list(t.edges), inst) for t in P.triangles)
    assert packing_weight(P, inst) == pytest.approx(parts)
    C = OrientedCyclePacking(((0, 1, 2, 3), (4, 5, 6, 7, 8)))
    assert packing_weight(C, inst) == pytest.approx(
        sum(inst.w[u, v] for u, v in C.directed_edges()))
    assert packing_weight([], inst) == 0.0


def test_report_text_and_json():
    r = Report(n=3, eps=0.2, tau=0.25, seed=1, w_Cstar=3.0, w_C=3.0, w_T1=3.0,
               w_T2=3.0, w_T3=3.0, w_best=3.0)
    text = r.to_text()
    assert "w_Bstar" not in text and "w_best" in text
    assert '"ratio": null' in r.to_json()


def test_perturbing_a_tight_triple_breaks_metric():
    inst = gen_graph_metric(12, 0.3, 2)
    w = inst.w
    tight = None
    for i in range(12):
        for j in range(i + 1, 12):
            for k in range(12):
                if k not in (i, j) and w[i, j] > 0 and abs(w[i, j] - w[i, k] - w[k, j]) <= 1e-12 * w.max():
                    tight = (i, j, k)
                    break
            if tight:
                break
        if tight:
            break
    assert tight is not None
    i, j, _ = tight
    bumped = np.array(w)
    bumped[i, j] = bumped[j, i] = w[i, j] + 10 * inst.tol * w.max()
    rep = check_metric(MetricInstance(bumped))
    assert not rep.ok and rep.kind == "triangle"
