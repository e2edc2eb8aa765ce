"""
Fixing a random matching by conditional expectations
====================================================

The third packing starts from a random matching X inside the short cycles.
Each random decision is fixed to the choice with the best conditional
expectation of f(X), so the final f(X) is at least its starting expectation.
"""

import random

from tripack import gen_graph_metric
from tripack.pack3 import (XDrawState, build_triplet_graph, conditional_expectation_f,
                           derandomize_X, f_value, max_matching_H, sample_X)
from tripack.verify import short_cycles

tau = 0.25
inst = gen_graph_metric(18, 0.3, seed=5)
C = short_cycles(inst)
Ystar = max_matching_H(build_triplet_graph(inst, C, tau))
print(f"cycles {[len(c) for c in C.cycles]}, |Y*| = {len(Ystar)}")

start = XDrawState.empty(C)
print(f"|L| = {start.L_size}, quota {start.quota}")
print(f"E[f(X)]        = {conditional_expectation_f(start, Ystar, tau, inst):.5f}")

# a few random X for comparison
rng = random.Random(0)
draws = [f_value(sample_X(C, rng)[1], Ystar, tau, inst) for _ in range(2000)]
print(f"sampled mean   = {sum(draws) / len(draws):.5f}  (min {min(draws):.5f})")

d = derandomize_X(C, Ystar, tau, inst)
print(f"f(X_det)       = {d.f:.5f}")
print("X =", d.X.edges)
