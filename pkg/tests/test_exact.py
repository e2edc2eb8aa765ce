from __future__ import annotations

import itertools

import pytest

from tripack.core import gen_euclidean, gen_graph_metric, uniform_instance
from tripack.exact import MAX_PACKING_N, OracleSizeError, exact_cycle_packing, exact_triangle_packing


def all_packings(n):
    def rec(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for b, c in itertools.combinations(rest[1:], 2):
            left = [v for v in rest if v not in (a, b, c)]
            for tail in rec(left):
                yield [(a, b, c)] + tail
    yield from rec(list(range(n)))


@pytest.mark.parametrize("seed", range(6))
def test_packing_enumeration(seed):
    inst = gen_graph_metric(9, 0.5, seed)
    packs = list(all_packings(9))
    assert len(packs) == 280
    best = max(sum(inst.triangle_weight(*t) for t in p) for p in packs)
    got = exact_triangle_packing(inst)
    assert got.weight == pytest.approx(best, abs=1e-12)
    assert got.packing.is_perfect(9)


def test_uniform_and_limits():
    assert exact_triangle_packing(uniform_instance(6)).weight == 6.0
    with pytest.raises(OracleSizeError):
        exact_triangle_packing(gen_euclidean(MAX_PACKING_N + 3, 0))
    with pytest.raises(OracleSizeError):
        exact_cycle_packing(gen_euclidean(9, 0))


def test_cycle_packing_triangle():
    inst = gen_euclidean(3, 4)
    C, val = exact_cycle_packing(inst)
    assert val == pytest.approx(inst.triangle_weight(0, 1, 2))
