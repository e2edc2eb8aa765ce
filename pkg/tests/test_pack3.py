from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripack.core import (Matching, MetricInstance, OrientedCyclePacking, StructuralError,
                          gen_euclidean, gen_graph_metric, packing_weight)
from tripack.exact import exact_expected_f
from tripack.pack3 import (LabeledEdge, Triplet, XDrawState, XSampler, augmented_weight,
                           build_t3, build_triplet_graph, complete_t3, conditional_expectation_f,
                           cycle_outcomes, derandomize_X, f_value, is_good, iter_completions,
                           max_matching_H, restrict, restrict_and_resolve, sample_X,
                           split_positions)
from tripack.verify import short_cycles


def labels_of(Ystar):
    return [(l.triplet.x, l.triplet.y, l.triplet.z, l.aug) for l in Ystar]


def setup(seed, n, tau=0.25, eps=0.4):
    inst = gen_euclidean(n, seed) if seed % 2 else gen_graph_metric(n, 0.4, seed)
    C = short_cycles(inst, eps)
    return inst, C, max_matching_H(build_triplet_graph(inst, C, tau))


@pytest.mark.parametrize("k", range(3, 11))
def test_cycle_outcomes_and_split(k):
    outs = cycle_outcomes(k)
    assert len(outs) == (2 if k % 2 == 0 else k * (k - 1))
    for o in outs:
        L, R = split_positions(k, o)
        picked = L + R
        assert len(set(picked)) == len(picked)
        # chosen positions form a matching on the cycle
        assert all((p + 1) % k not in picked for p in picked)
        if k % 2:
            d, r = o
            assert R == [r] and d not in picked and len(L) == (k - 3) // 2
        else:
            assert R == [] and len(L) == k // 2


@pytest.mark.parametrize("sizes", [[3], [4, 5], [3, 3, 3], [6, 7, 5], [10, 9, 8]])
def test_L_size_formula(sizes):
    cycles, s = [], 0
    for k in sizes:
        cycles.append(tuple(range(s, s + k)))
        s += k
    C = OrientedCyclePacking(tuple(cycles))
    st_ = XDrawState.empty(C)
    odd = sum(k % 2 for k in sizes)
    assert st_.L_size == (sum(sizes) - 3 * odd) // 2
    assert st_.quota == 2 * st_.L_size // 3
    rng = random.Random(0)
    for _ in range(20):
        X = XSampler(C).draw_edges(rng)
        assert len(X) == st_.quota + odd
        if sum(sizes) % 3 == 0:
            assert len(X) == sum(sizes) // 3


def test_is_good_boundary():
    w = np.array([[0, 1.5, 1, 1], [1.5, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]], dtype=float)
    inst = MetricInstance(w)
    assert is_good(inst, 0, 1, 2, 0.25)          # 1.5 == 0.75 * 2
    assert not is_good(inst, 0, 1, 2, 0.3)


def lab(x, y, z, aug):
    return LabeledEdge(Triplet(x, y, z), aug)


def test_conflict_keeps_heavier_label():
    X = Matching(((0, 1),))
    a, b = lab(0, 1, 2, 5.0), lab(1, 0, 3, 3.0)
    assert restrict_and_resolve([a, b], X) == [a]
    assert restrict_and_resolve([b, a], X) == [a]


def test_conflict_tie_keeps_smaller_ends():
    X = Matching(((0, 1),))
    a, b = lab(0, 1, 3, 4.0), lab(1, 0, 2, 4.0)
    assert restrict_and_resolve([a, b], X) == [a]          # ends (0, 3) < (1, 2)
    assert restrict_and_resolve([b, a], X) == restrict_and_resolve([a, b], X)


def test_restrict_drops_covered_third_vertex():
    X = Matching(((0, 1), (2, 3)))
    assert restrict([lab(0, 1, 2, 1.0), lab(2, 3, 4, 1.0)], X) == [lab(2, 3, 4, 1.0)]
    with pytest.raises(StructuralError):
        restrict_and_resolve([lab(0, 1, 4, 1.0), lab(1, 0, 5, 1.0), lab(0, 1, 6, 1.0)], X)


def test_state_matching_checks():
    C = OrientedCyclePacking(((0, 1, 2, 3, 4, 5),))
    st_ = XDrawState.empty(C)
    with pytest.raises(ValueError):
        st_.pools()
    st_ = st_.with_outcome(0, (0,))
    assert st_.quota == 2
    with pytest.raises(ValueError):
        st_.matching()
    assert len(st_.with_bit(1).with_bit(1).matching()) == 2
    assert st_.with_bit(0).matching().edges == ((2, 3), (4, 5))
    with pytest.raises(ValueError):
        st_.with_bit(1).with_bit(1).with_bit(1).matching()


@pytest.mark.parametrize("seed", range(12))
def test_closed_form_matches_tree_oracle(seed):
    inst, C, Ystar = setup(seed, (6, 9, 12)[seed % 3])
    if XDrawState.empty(C).L_size > 6:
        pytest.skip("tree too large")
    st_ = XDrawState.empty(C)
    exact = exact_expected_f(C, labels_of(Ystar), 0.25, inst)
    assert conditional_expectation_f(st_, Ystar, 0.25, inst) == pytest.approx(exact, rel=1e-12)
    brute = sum(p * f_value(s.matching(), Ystar, 0.25, inst) for s, p in iter_completions(st_))
    assert brute == pytest.approx(exact, rel=1e-12)


@given(st.integers(0, 10**5), st.sampled_from([6, 9, 12]), st.integers(0, 10**5))
@settings(max_examples=25, deadline=None)
def test_law_of_total_expectation(seed, n, path_seed):
    inst, C, Ystar = setup(seed, n)
    rng = random.Random(path_seed)
    state = XDrawState.empty(C)
    tau = 0.25
    for i, cyc in enumerate(C.cycles):
        outs = cycle_outcomes(len(cyc))
        here = conditional_expectation_f(state, Ystar, tau, inst)
        kids = [conditional_expectation_f(state.with_outcome(i, o), Ystar, tau, inst) for o in outs]
        assert here == pytest.approx(sum(kids) / len(kids), rel=1e-12, abs=1e-12)
        state = state.with_outcome(i, rng.choice(outs))
    L, _ = state.pools()
    left = state.quota
    for j in range(len(L)):
        rest = len(L) - j
        if left in (0, rest):
            break
        here = conditional_expectation_f(state, Ystar, tau, inst)
        one = conditional_expectation_f(state.with_bit(1), Ystar, tau, inst)
        zero = conditional_expectation_f(state.with_bit(0), Ystar, tau, inst)
        p = left / rest
        assert here == pytest.approx(p * one + (1 - p) * zero, rel=1e-12, abs=1e-12)
        b = rng.randrange(2)
        state = state.with_bit(b)
        left -= b


@pytest.mark.parametrize("seed", range(8))
def test_derandomized_dominates_and_bounds_t3(seed):
    inst, C, Ystar = setup(seed, 15, eps=0.2)
    d = derandomize_X(C, Ystar, 0.25, inst)
    assert d.f >= d.expected_f - 1e-9
    assert d.expected_f >= 0.25 / 18 * augmented_weight(Ystar) + 2 / 3 * packing_weight(C, inst) - 1e-9
    res = build_t3(C, inst, 0.25)
    assert res.X == d.X
    assert res.packing.is_perfect(15)
    assert packing_weight(res.packing, inst) >= res.f - 1e-9


def test_complete_t3_rejects_foreign_label():
    inst = gen_euclidean(6, 0)
    X = Matching(((0, 1), (2, 3)))
    with pytest.raises(StructuralError):
        complete_t3(X, [lab(4, 5, 0, 1.0)], inst)


def test_odd_marginals():
    from tripack.pack3 import _edge_marginal, _vertex_marginal
    assert _edge_marginal(5) == (pytest.approx(1 / 5), pytest.approx(1 / 5))
    assert _edge_marginal(6) == (0.5, 0.0)
    assert _vertex_marginal(5) == (pytest.approx(2 / 5), pytest.approx(2 / 5))


@pytest.mark.parametrize("seed", range(6))
def test_ystar_covers_half_of_classes_three_and_five(seed):
    from tripack.classify import parameters
    from tripack.exact import exact_triangle_packing
    inst = gen_euclidean(12, seed) if seed % 2 else gen_graph_metric(12, 0.3, seed)
    C = short_cycles(inst, 0.2)
    Ystar = max_matching_H(build_triplet_graph(inst, C, 0.25))
    p = parameters(exact_triangle_packing(inst).packing, C, 0.25, inst)
    assert augmented_weight(Ystar) >= 0.5 * (p.weight[3] + p.weight[5]) - 1e-9


@pytest.mark.parametrize("seed", range(6))
def test_ystar_equals_brute_force_on_small_H(seed):
    from tripack.exact import exact_matching
    from tripack.matching import WeightedGraph
    inst = gen_euclidean(9, seed)
    C = short_cycles(inst, 0.4)
    H = build_triplet_graph(inst, C, 0.25)
    g = WeightedGraph.build(H.n, [(u, v, l.aug) for (u, v), l in H.edges.items()])
    assert augmented_weight(max_matching_H(H)) == pytest.approx(g.weight_of(exact_matching(g)), abs=1e-12)


@given(st.integers(0, 10**5), st.sampled_from([9, 12, 15]), st.integers(0, 10**5))
@settings(max_examples=30, deadline=None)
def test_resolved_keeps_half_of_restricted(seed, n, draw):
    inst, C, Ystar = setup(seed, n, eps=0.2)
    _, X = sample_X(C, random.Random(draw))
    full = augmented_weight(restrict(Ystar, X))
    assert augmented_weight(restrict_and_resolve(Ystar, X)) >= 0.5 * full - 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_expected_weight_of_X_from_marginals(seed):
    from tripack.pack3 import _edge_marginal
    inst, C, _ = setup(seed, 12, eps=0.2)
    want = 0.0
    for cyc in C.cycles:
        pl, pr = _edge_marginal(len(cyc))
        k = len(cyc)
        want += sum(float(inst.w[cyc[i], cyc[(i + 1) % k]]) * (2 / 3 * pl + pr) for i in range(k))
    got = conditional_expectation_f(XDrawState.empty(C), (), 0.25, inst) / 2
    assert got == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_full_state_value_is_f(seed):
    inst, C, Ystar = setup(seed, 9)
    rng = random.Random(seed)
    state = XDrawState.empty(C)
    for i, cyc in enumerate(C.cycles):
        state = state.with_outcome(i, rng.choice(cycle_outcomes(len(cyc))))
    L, _ = state.pools()
    bits = [1] * state.quota + [0] * (len(L) - state.quota)
    rng.shuffle(bits)
    for b in bits:
        state = state.with_bit(b)
    assert conditional_expectation_f(state, Ystar, 0.25, inst) == pytest.approx(
        f_value(state.matching(), Ystar, 0.25, inst), rel=1e-12)
