"""
Internal, partial-external and external triangles
=================================================

Three directed cycles on grid points, and three triangles placed across them.
Each triangle gets a category, its out-edges, and a type for a given tau.
"""

from tripack.classify import classify, parameters, type_split
from tripack.fixtures import figure_fixture

fx = figure_fixture()
print("cycles:", fx.C.cycles)

# out-edges leave the external vertices along the cycle direction
inverse = {v: p for p, v in fx.point.items()}
name_of = {vs: name for name, vs in fx.names.items()}
for cls in sorted(type_split(classify(fx.B, fx.C), fx.inst, 0.25),
                  key=lambda c: name_of[c.triangle.vertices]):
    name = name_of[cls.triangle.vertices]
    outs = [(inverse[x], inverse[y]) for x, y in cls.out_edges]
    print(f"{name}: {cls.category.value:<17} type={cls.type} out-edges={outs}")

# shares of w(B) by class, split over light, middle and heavy edges
p = parameters(fx.B, fx.C, 0.25, fx.inst)
for i in range(1, 6):
    if p.alpha[i]:
        print(f"class {i}: alpha={p.alpha[i]:.3f}  rho={p.rho[i]:.3f}  "
              f"sigma={p.sigma[i]:.3f}  theta={p.theta[i]:.3f}")
