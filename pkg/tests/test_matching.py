from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from tripack.core import gen_euclidean
from tripack.exact import exact_matching
from tripack.matching import (InfeasibleMatchingError, WeightedGraph, max_weight_matching,
                              max_weight_matching_of_size, max_weight_perfect_matching)


def test_single_edge():
    g = WeightedGraph.build(2, [(0, 1, 5.0)])
    assert max_weight_matching(g).edges == ((0, 1),)
    assert max_weight_perfect_matching(g).edges == ((0, 1),)


def test_triangle_takes_heaviest_edge():
    g = WeightedGraph.build(3, [(0, 1, 3.0), (1, 2, 2.0), (0, 2, 2.0)])
    assert max_weight_matching(g).edges == ((0, 1),)


def test_four_cycle_perfect():
    g = WeightedGraph.build(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (0, 3, 2.0)])
    m = max_weight_perfect_matching(g)
    assert m.edges == ((0, 3), (1, 2)) and g.weight_of(m) == 4.0


def test_perfect_infeasible():
    with pytest.raises(InfeasibleMatchingError):
        max_weight_perfect_matching(WeightedGraph.build(3, [(0, 1, 1.0), (1, 2, 1.0)]))
    with pytest.raises(InfeasibleMatchingError):
        max_weight_perfect_matching(WeightedGraph.build(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]))


def test_fixed_size_edge_cases():
    g = WeightedGraph.complete(gen_euclidean(6, 0))
    assert len(max_weight_matching_of_size(g, 0)) == 0
    uni = WeightedGraph.build(6, [(u, v, 1.0) for u in range(6) for v in range(u + 1, 6)])
    assert uni.weight_of(max_weight_matching_of_size(uni, 2)) == 2.0
    with pytest.raises(InfeasibleMatchingError):
        max_weight_matching_of_size(WeightedGraph.build(4, [(0, 1, 1.0)]), 2)
    with pytest.raises(ValueError):
        max_weight_matching_of_size(g, 4)


def test_build_canonicalises_parallel_edges():
    g = WeightedGraph.build(3, [(1, 0, 1.0), (0, 1, 4.0), (2, 1, 2.0)])
    assert g.edges == ((0, 1, 4.0), (1, 2, 2.0))
    with pytest.raises(ValueError):
        WeightedGraph.build(2, [(1, 1, 1.0)])


def random_graph(rng, n):
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.6:
                edges.append((u, v, float(rng.randint(0, 4)) if rng.random() < 0.5 else rng.random()))
    return WeightedGraph.build(n, edges)


@given(st.integers(0, 10**6), st.integers(2, 10))
@settings(max_examples=120, deadline=None)
def test_blossom_equals_brute_force(seed, n):
    rng = random.Random(seed)
    g = random_graph(rng, n)
    assert g.weight_of(max_weight_matching(g)) == pytest.approx(g.weight_of(exact_matching(g)), abs=1e-12)
    for k in range(n // 2 + 1):
        try:
            want = g.weight_of(exact_matching(g, k))
        except ValueError:
            with pytest.raises(InfeasibleMatchingError):
                max_weight_matching_of_size(g, k)
            continue
        got = max_weight_matching_of_size(g, k)
        assert len(got) == k
        assert g.weight_of(got) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_fixed_size_monotone_in_k(seed):
    g = WeightedGraph.complete(gen_euclidean(9, seed))
    vals = [g.weight_of(max_weight_matching_of_size(g, k)) for k in range(5)]
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_output_is_deterministic():
    g = WeightedGraph.complete(gen_euclidean(10, 4))
    assert max_weight_perfect_matching(g) == max_weight_perfect_matching(g)


@pytest.mark.parametrize("seed", range(200))
def test_eight_vertex_graphs(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 8)
    assert g.weight_of(max_weight_matching(g)) == pytest.approx(g.weight_of(exact_matching(g)), abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_ten_vertex_complete_perfect(seed):
    g = WeightedGraph.complete(gen_euclidean(10, seed))
    m = max_weight_perfect_matching(g)
    assert len(m) == 5
    assert g.weight_of(m) == pytest.approx(g.weight_of(exact_matching(g, 5)), abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_nine_vertex_metric_size_three(seed):
    g = WeightedGraph.complete(gen_euclidean(9, seed))
    assert g.weight_of(max_weight_matching_of_size(g, 3)) == pytest.approx(
        g.weight_of(exact_matching(g, 3)), abs=1e-12)
