from __future__ import annotations

import math
import random

import pytest

from tripack.core import TrianglePacking, gen_euclidean, packing_weight
from tripack.exact import exact_triangle_packing
from tripack.fixtures import z_case_fixture
from tripack.pack2 import (Z_EDGE_BOUND, ZSampler, build_t2, case_probability, verify_Z,
                           z_expectation_bound)
from tripack.verify import short_cycles


def test_bound_constant():
    assert Z_EDGE_BOUND == 97 / 1215
    assert case_probability(6, 5) == pytest.approx(13 / 18 - 1 / 270)
    assert case_probability(5) == 13 / 18
    with pytest.raises(ValueError):
        case_probability(7)


@pytest.mark.parametrize("seed", range(5))
def test_t2_weighs_twice_the_matching(seed):
    inst = gen_euclidean(12, seed)
    T2, M = build_t2(inst)
    assert T2.is_perfect(12) and len(M) == 4
    assert packing_weight(T2, inst) >= 2 * packing_weight(M, inst) - 1e-12
    with pytest.raises(ValueError):
        build_t2(gen_euclidean(7, 0))


@pytest.mark.parametrize("case", range(1, 7))
def test_case_fixture_shape(case):
    f = z_case_fixture(case)
    sampler = ZSampler(f.Bstar, f.C, 0.25, f.inst)
    assert all(c.type in (1, None) for c in sampler.classes)
    y, z = f.target
    assert (y, z) in {(x, xp) for x, xp, _ in sampler.candidates}


@pytest.mark.parametrize("case", range(1, 7))
def test_case_probabilities_quick(case):
    f = z_case_fixture(case)
    sampler = ZSampler(f.Bstar, f.C, 0.25, f.inst)
    rng = random.Random(case)
    in_y = in_z = 0
    for _ in range(20_000):
        _, Y, Zout = sampler.draw(rng)
        if f.target in Y:
            in_y += 1
            in_z += f.target in Zout
    p = f.expected
    assert abs(in_z / in_y - p) <= 4 * math.sqrt(p * (1 - p) / in_y) + 1e-12


def test_case6_needs_odd_length():
    with pytest.raises(ValueError):
        z_case_fixture(6, l=6)


@pytest.mark.parametrize("seed", range(4))
def test_sample_is_one_edge_per_triangle(seed):
    inst = gen_euclidean(12, seed)
    B = exact_triangle_packing(inst).packing
    sampler = ZSampler(B, short_cycles(inst), 0.25, inst)
    rng = random.Random(seed)
    for _ in range(200):
        s = sampler.sample(rng)
        assert len(s.Z) == 4 and len(s.X) == 4
        opp, Y, Zout = sampler.draw(random.Random(seed))
        assert set(Zout) <= set(Y)


def test_requires_perfect_packing():
    inst = gen_euclidean(6, 0)
    partial = TrianglePacking.from_vertex_sets([(0, 1, 2)], inst)
    with pytest.raises(ValueError):
        ZSampler(partial, short_cycles(inst), 0.25, inst)


def test_verify_Z_on_oracle_instance():
    inst = gen_euclidean(9, 11)
    B = exact_triangle_packing(inst).packing
    C = short_cycles(inst)
    rep = verify_Z(B, C, 0.25, inst, 5000, 1)
    assert rep.bound_wZ == pytest.approx(z_expectation_bound(B, C, 0.25, inst))
    assert rep.bound_wZ >= packing_weight(B, inst) / 3 - 1e-12
    assert rep.expectation_ok
    assert "E[w(Z)]" in rep.table()


@pytest.mark.parametrize("seed", range(5))
def test_t2_beats_twice_heaviest_edges(seed):
    inst = gen_euclidean(12, seed)
    B = exact_triangle_packing(inst).packing
    T2, _ = build_t2(inst)
    assert packing_weight(T2, inst) >= 2 * sum(float(inst.w[t.c]) for t in B.triangles) - 1e-12


@pytest.mark.slow
def test_out_edge_selected_with_probability_one_ninth():
    f = z_case_fixture(4)
    sampler = ZSampler(f.Bstar, f.C, 0.25, f.inst)
    rng = random.Random(9)
    trials = 100_000
    hits = {(x, y): 0 for x, y, _ in sampler.candidates}
    for _ in range(trials):
        for e in sampler.draw(rng)[1]:
            hits[e] += 1
    sigma = math.sqrt((1 / 9) * (8 / 9) / trials)
    for e, h in hits.items():
        assert abs(h / trials - 1 / 9) <= 3 * sigma, e
