"""Cohomology ranks of the unit tangent bundle of S^n via the Gysin sequence.

Regenerates ``UNIT_TANGENT_TABLE`` in ``shcalc/morse_bott.py``:

    python scripts/gysin_oracle.py 16

For the sphere bundle S^{n-1} -> E -> S^n with Euler class e (of degree n,
evaluating to chi(S^n) = 1 + (-1)^n on the fundamental class),

    H^k(E) = coker(e: H^{k-n}(S^n) -> H^k(S^n)) + ker(e: H^{k-n+1}(S^n) -> H^{k+1}(S^n)).
"""

import sys


def base_rank(n, k):
    return 1 if k in (0, n) else 0


def cup_euler_rank(n, k, char):
    """Rank of cup product with e from H^k(S^n) to H^{k+n}(S^n)."""
    if k != 0:
        return 0
    chi = 1 + (-1) ** n
    if char:
        chi %= char
    return 1 if chi else 0


def unit_tangent_ranks(n, char=0):
    ranks = {}
    for k in range(0, 2 * n):
        coker = base_rank(n, k) - cup_euler_rank(n, k - n, char)
        ker = base_rank(n, k - n + 1) - cup_euler_rank(n, k - n + 1, char)
        if coker + ker:
            ranks[k] = coker + ker
    return ranks


def table(nmax):
    """Keyed by (n, euler_vanishes); the degrees with rank 1."""
    out = {}
    for n in range(1, nmax + 1):
        for vanishes, char in ((False, 0), (True, 2)):
            r = unit_tangent_ranks(n, char)
            assert set(r.values()) <= {1, 2}
            out[(n, vanishes)] = tuple(d for d, m in sorted(r.items()) for _ in range(m))
    return out


if __name__ == "__main__":
    nmax = int(sys.argv[1]) if len(sys.argv) > 1 else 16
    for key, degs in table(nmax).items():
        print(f"    {key}: {degs},")
