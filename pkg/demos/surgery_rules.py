"""Evaluate SH of some model expressions and show the evaluation traces."""

from shcalc.dsl import parse_expr
from shcalc.surgery import evaluate, finite_type, op_degree, sphere_vanishing, NonzeroFlag

for src in ("ball(5)", "csum(surface(2), surface(1))", "handle(tstar_sphere(3), 2, -1)",
            "prod(axiom(ramanujam), axiom(ramanujam))", "prod(tstar_torus(2), axiom(point))",
            "tower(axiom(ramanujam), 4)"):
    ev = evaluate(parse_expr(src))
    print(src, "->", ev.value.describe())
    for line in ev.trace:
        print("    ", line)

v = sphere_vanishing(4)
print("filling of S^7:", v.status)
for line in v.trace:
    print("    ", line)

print("tower over a nonzero base:", finite_type(NonzeroFlag(), 6).status)
print("unit degree in dimension 6:", op_degree(1, 0, 0, 3).shift)
print("BV operator:", op_degree(1, 1, 0, 3, 1).shift)
