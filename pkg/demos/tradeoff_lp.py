"""
The trade-off LP over tau
=========================

tau moves weight between the second and third packings.  Solving the LP
on a grid shows where the guarantee peaks.
"""

import numpy as np

from tripack.tradeoff import build_lp, solve_lp, sweep

taus = np.linspace(0.0, 1.0 / 3.0, 13)
for tau, value in sweep(taus):
    bar = "#" * int(round((value - 2 / 3) * 1e5))
    print(f"tau={tau:.4f}  value={value:.8f}  {bar}")

# the witness at tau = 1/4: an adversarial mix of triangle classes
sol = solve_lp(build_lp(0.25))
print(f"\nvalue at 1/4: {sol.value!r}")
for k, v in sol.point.items():
    if abs(v) > 1e-12:
        print(f"  {k:<7} {v:.6f}")
