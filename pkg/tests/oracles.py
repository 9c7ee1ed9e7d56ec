"""Independent reference computations used by the tests.

Nothing here imports the linear algebra, series or counting code under
test; each oracle takes the long way round.
"""

import itertools
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

import sympy


def rank_q(m):
    """Rank over Q through sympy."""
    if not m or not m[0]:
        return 0
    return sympy.Matrix(m).rank()


def rank_mod_p(m, p):
    """Rank over F_p by plain elimination on a copy."""
    rows = [[x % p for x in r] for r in m]
    if not rows or not rows[0]:
        return 0
    r = 0
    for c in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def rank_oracle(m, p=0):
    return rank_q(m) if p == 0 else rank_mod_p(m, p)


def unimodular(n, rng, steps=None):
    """Random integer matrix of determinant 1 together with its inverse."""
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    ginv = [row[:] for row in g]
    for _ in range(steps if steps is not None else 3 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-1, 1, 2])
        # g <- g E_ij(c) (column op), ginv <- E_ij(-c) ginv (row op)
        for r in range(n):
            g[r][j] += c * g[r][i]
        ginv[i] = [x - c * y for x, y in zip(ginv[i], ginv[j])]
    return g, ginv


def _mm(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def random_complex(rng, a, b, c):
    """``A --d1--> B --d2--> C`` with integer entries and ``d2 d1 = 0`` over Z.

    B is split (after a random change of basis) as ``B1 + B2 + B3``; d1
    lands in B1 and d2 only sees B2.
    """
    b1 = rng.randint(0, b)
    b2 = rng.randint(0, b - b1)
    g, ginv = unimodular(b, rng) if b else ([], [])
    y = [[rng.randint(-2, 2) for _ in range(a)] for _ in range(b1)]
    x = [[rng.randint(-2, 2) for _ in range(b2)] for _ in range(c)]
    # d1 = g [y; 0; 0], d2 = [0 x 0] ginv
    d1 = [[sum(g[r][k] * y[k][j] for k in range(b1)) for j in range(a)] for r in range(b)]
    d2 = [[sum(x[r][k] * ginv[b1 + k][j] for k in range(b2)) for j in range(b)] for r in range(c)]
    return d1, d2


# ---------------------------------------------------------------------------
# series


def _poly_mul(f, g, N):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = e1 + e2
            if e < N:
                out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def mu_k_sum(discs, a1, a2, N):
    """``sum_k mu^k(a, ..., a)`` with ``mu^k = sum_alpha k_alpha t^A a(alpha)^k / k!``.

    ``a1``, ``a2`` are dicts exponent -> coefficient with positive exponents.
    The power ``a(alpha)^k`` is built by repeated multiplication, and the
    sum over ``k`` stops once ``k * val(a) + min area`` passes ``N``.
    """
    N = Fraction(N)
    total = {}
    for alpha, k_alpha, A in discs:
        A = Fraction(A)
        aa = {}
        for e, c in a1.items():
            aa[Fraction(e)] = aa.get(Fraction(e), 0) + alpha[0] * Fraction(c)
        for e, c in a2.items():
            aa[Fraction(e)] = aa.get(Fraction(e), 0) + alpha[1] * Fraction(c)
        aa = {e: c for e, c in aa.items() if c}
        power = {Fraction(0): Fraction(1)}
        k = 0
        while power:
            for e, c in power.items():
                if A + e < N:
                    total[A + e] = total.get(A + e, 0) + k_alpha * c / math.factorial(k)
            k += 1
            power = _poly_mul(power, aa, N - A)
    return {e: c for e, c in sorted(total.items()) if c}


def random_positive_series(rng, max_terms=4, max_exp=6, dens=(1, 2, 3)):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = Fraction(rng.randint(1, max_exp * 3), rng.choice(dens))
        if e > 0:
            terms[e] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return {e: c for e, c in terms.items() if c}


# ---------------------------------------------------------------------------
# ODE for the decay schedule


def integrate_decay(C, length, tau_plus):
    """Integrate ``d tau / ds = C tau + C`` backwards along the schedule.

    Running ``d tau / ds = -C tau - C`` from ``tau_-`` for ``length`` lands
    on ``tau_+``; integrating the reversed equation from ``tau_+`` recovers
    the smallest admissible ``tau_-``.
    """
    from scipy.integrate import solve_ivp

    sol = solve_ivp(lambda s, y: [C * y[0] + C], (0.0, float(length)), [float(tau_plus)],
                    method="DOP853", rtol=1e-13, atol=1e-13)
    return float(sol.y[0, -1])


# ---------------------------------------------------------------------------
# counting


def torus_period(samples, p, q):
    """Period of direction ``(p, q)`` by scanning the segments, or None if not attained."""
    for (s0, a0, b0), (s1, a1, b1) in zip(samples, samples[1:]):
        # q xi1(s) - p xi2(s) on this segment, as a linear function of s
        f0 = q * a0 - p * b0
        f1 = q * a1 - p * b1
        if f0 >= 0 >= f1 and f0 != f1:
            lam = Fraction(f0, 1) / (f0 - f1)
            xi1 = a0 + lam * (a1 - a0)
            xi2 = b0 + lam * (b1 - b0)
            return Fraction(p) / xi1 if xi1 else Fraction(q) / xi2
    return None


def torus_pairs(samples, tau):
    """Brute-force count of attained directions with period below ``tau``."""
    pb = int(tau * max(a for _, a, _ in samples)) + 2
    qb = int(tau * max(b for _, _, b in samples)) + 2
    count = 0
    for p in range(1, pb):
        for q in range(1, qb):
            T = torus_period(samples, p, q)
            if T is not None and T < tau:
                count += 1
    return count


def lattice_brute(n, tau):
    R = int(tau) + 1
    return sum(1 for v in itertools.product(range(-R, R + 1), repeat=n)
               if any(v) and sum(x * x for x in v) < tau * tau)


def gysin_table(nmax):
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))
    try:
        import gysin_oracle
    finally:
        sys.path.pop(0)
    return gysin_oracle.table(nmax)


def seeded(name, seed=0):
    return random.Random(f"{seed}:{name}")
