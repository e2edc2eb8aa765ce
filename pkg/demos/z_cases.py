"""
How often an out-edge survives into Z
=====================================

Six small configurations, one per local case around an out-edge y -> z.
The sampler is run many times and P[e in Z | e in Y] is compared with its
closed form.
"""

import math
import random

from tripack.fixtures import z_case_fixture
from tripack.pack2 import ZSampler

trials = 50_000
for case in range(1, 7):
    f = z_case_fixture(case)
    sampler = ZSampler(f.Bstar, f.C, 0.25, f.inst)
    rng = random.Random(case)
    in_y = in_z = 0
    for _ in range(trials):
        _, Y, Zout = sampler.draw(rng)
        if f.target in Y:
            in_y += 1
            in_z += f.target in Zout
    est = in_z / in_y
    sigma = math.sqrt(f.expected * (1 - f.expected) / in_y)
    print(f"case {case}: n={f.inst.n:>2}  estimate {est:.4f}  exact {f.expected:.4f}  "
          f"({(est - f.expected) / sigma if sigma else 0.0:+.2f} sigma)")
