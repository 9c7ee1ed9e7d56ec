"""Walk through the four builtin Morse-Bott spectral sequences."""

from shcalc.morse_bott import builtin_case, u_torsion_free_rank
from shcalc.spectral import degeneration_check, run_pages


def show(title, ss):
    final = run_pages(ss)
    print(f"== {title}: window {ss.initial.window}, columns {ss.initial.columns}")
    print("   E_1 totals:", dict(sorted(ss.initial.totals().items())))
    print("   E_inf totals:", dict(sorted(final.totals().items())))
    return final


show("ball(3)", builtin_case("ball", 3))
show("surface(2)", builtin_case("surface", 2))

ss = builtin_case("tstar_sphere", 4)
show("tstar_sphere(4)", ss)
print("   degeneration:", degeneration_check(ss.initial, 1).status)

final = show("s2_equivariant", builtin_case("s2_equivariant", window=(-13, 0)))
print("   p = 0 column:", final.column(0))
print("   K-towers:", u_torsion_free_rank(final.column(0), (-12, 0)))
