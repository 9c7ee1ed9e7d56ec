"""Maurer-Cartan solving for two small disc-count configurations on a torus."""

from fractions import Fraction

from shcalc.novikov_mc import DiscData, essential_verdict, m1, solve_mc

cases = {
    "two opposite discs": DiscData.of([((1, 0), 1, 1), ((-1, 0), 1, 1)]),
    "two independent discs": DiscData.of([((1, 0), 1, 1), ((0, 1), 1, 1)]),
    "opposite plus a heavier disc": DiscData.of([((1, 0), 1, 1), ((-1, 0), 1, 1),
                                                 ((-1, 0), 1, 2)]),
}
for name, d in cases.items():
    v = essential_verdict(d, 8)
    print(f"{name}: {v.status} (mod t^{v.trunc})")
    if v.mc.a is not None:
        print("   a =", v.mc.a.as_dict(), " c =", v.mc.c)
        print("   m1(a) =", [str(x) for x in m1(d, v.mc.a, 8)])
    else:
        print("   ", v.mc.reason, "at order", v.mc.order)

# rescaling every area by 2/3 reparametrises the solution
d = cases["opposite plus a heavier disc"]
print(solve_mc(d.rescale(Fraction(2, 3)), Fraction(16, 3)).a.as_dict())
