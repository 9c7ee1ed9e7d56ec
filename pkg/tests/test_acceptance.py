"""The twelve acceptance criteria, each at its stated tolerance.

Run under pytest for one test per criterion plus a summary block, or as
``python3 tests/test_acceptance.py`` for the pass/fail lines alone.
"""

import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from shcalc.algebra import (GradedMap, GradedSpace, direct_limit, homology,  # noqa: E402
                            tensor_product)
from shcalc.dsl import Handle, parse_expr  # noqa: E402
from shcalc.linalg import Field  # noqa: E402
from shcalc.morse_bott import builtin_case, u_torsion_free_rank  # noqa: E402
from shcalc.novikov_mc import (Deformation, DiscData, NovikovSeries, essential_verdict,  # noqa: E402
                               m0)
from shcalc.reeb_growth import (INF, CountFunction, LogNumber, TorusPieceProfile,  # noqa: E402
                                ball_truncated_tower, geometric_taus, growth_exponent,
                                image_rank_counts, ladder_verify, lattice_count_function,
                                schedule_gap, torus_count_function)
from shcalc.spectral import degeneration_check, run_pages, turn_page  # noqa: E402
from shcalc.surgery import (Graded, NonzeroFlag, Zero, eval_sh, finite_type,  # noqa: E402
                            product_values, sphere_vanishing, sum_values)

RESULTS = {}


def record(k, name):
    """Decorator: the check returns ``(ok, detail)``; store it and fail the test if not ok."""
    def wrap(fn):
        def check():
            try:
                ok, detail = fn()
            except Exception as ex:  # a crash is a failure with its message
                ok, detail = False, f"{type(ex).__name__}: {ex}"
            RESULTS[k] = (name, ok, detail)
            try:
                from conftest import ACCEPTANCE
                ACCEPTANCE[k] = RESULTS[k]
            except ImportError:
                pass
            return ok, detail

        def test():
            ok, detail = check()
            assert ok, detail
        test.check = check
        test.__name__ = fn.__name__
        return test
    return wrap


@record(1, "ball E1 generators and E2 = 0")
def test_c01_ball():
    t0 = time.perf_counter()
    problems = []
    for n in (2, 3, 4):
        ss = builtin_case("ball", n)
        assert ss.initial.window == (-10 * n - 2, 0)
        totals = ss.initial.totals()
        listed = {-n, -n - 1, -3 * n, -3 * n - 1, -5 * n, -5 * n - 1}
        if totals != {d: 1 for d in listed}:
            extra = sorted(set(totals) - listed)
            missing = sorted(listed - set(totals))
            problems.append(f"n={n}: extra {extra} missing {missing}")
        if not turn_page(ss.initial, ss.differentials[0]).is_zero():
            problems.append(f"n={n}: E2 != 0")
    dt = time.perf_counter() - t0
    if dt >= 1:
        problems.append(f"runtime {dt:.2f}s")
    return not problems, "; ".join(problems + [f"{dt:.3f}s"]) if problems else f"exact, {dt:.3f}s"


@record(2, "surface E_inf formula")
def test_c02_surface():
    problems = []
    for g in (1, 2, 3):
        for window in (None, (-1, 8 * g - 4)):
            ss = builtin_case("surface", g, window=window)
            lo, hi = ss.initial.window
            want = {}
            for d, m in ((-1, 1), (0, 2 * g)):
                want[d] = want.get(d, 0) + m
            s = 4 * g - 3
            while s <= hi:
                for d in (s, s + 1):
                    want[d] = want.get(d, 0) + 1
                s += 4 * g - 2
            want = {d: m for d, m in want.items() if lo <= d <= hi}
            got = run_pages(ss).totals()
            if got != want:
                problems.append(f"g={g} window {(lo, hi)}: {got} != {want}")
    return not problems, "; ".join(problems) or "g = 1, 2, 3 exact on two windows"


@record(3, "cotangent sphere degeneration")
def test_c03_tstar():
    verdicts = {}
    for n in (4, 5):
        pg = builtin_case("tstar_sphere", n, window=(-70, 1)).initial
        verdicts[n] = degeneration_check(pg, 1).status
    ok = all(v == "degenerate" for v in verdicts.values())
    return ok, f"verdicts {verdicts}"


@record(4, "equivariant S^2 pattern and u-torsion-free rank")
def test_c04_s2():
    ss = builtin_case("s2_equivariant", window=(-13, 0))
    pg = ss.initial
    pmin, pmax = pg.columns

    def expected(p, q):
        if p == 0:
            return 1 if q == 0 else (2 if q < 0 and q % 2 == 0 else 0)
        return 1 if q in (p - 1, p + 1) else 0

    problems = []
    for p in range(pmin, pmax + 1):
        for q in range(-12, 1):
            if pg.window[0] <= p + q <= pg.window[1] and pg.dim(p, q) != expected(p, q):
                problems.append(f"E1({p},{q}) = {pg.dim(p, q)}")
    if any(not -12 <= q <= 0 for (p, q), m in pg.entries.items() if p == 0):
        problems.append("p = 0 column outside q range")
    final = run_pages(ss)
    col = final.column(0)
    if col != {q: 1 for q in range(-12, 1, 2)}:
        problems.append(f"E_inf p=0 column {col}")
    rank = u_torsion_free_rank(col, (-12, 0))
    if rank != 1:
        problems.append(f"u-torsion-free rank {rank}")
    return not problems, "; ".join(problems) or "pattern exact, one K-tower"


@record(5, "truncated ball tower")
def test_c05_tower():
    sys_ = ball_truncated_tower(2, 6)
    degs = [sorted(V.dims.items()) for V in sys_.stages]
    want = [[(-2 - 4 * k, 1)] for k in range(7)]
    problems = []
    if degs != want:
        problems.append(f"stages {degs}")
    if not all(f.is_zero() for f in sys_.maps):
        problems.append("nonzero connecting map")
    if not direct_limit(sys_).space.is_zero():
        problems.append("direct limit nonzero")
    g = growth_exponent(image_rank_counts(sys_, list(range(1, 8))))
    if g != -INF:
        problems.append(f"Gamma = {g}")
    return not problems, "; ".join(problems) or "stages -2, -6, ..., -26; limit 0; Gamma = -inf"


@record(6, "growth exponents")
def test_c06_growth():
    t0 = time.perf_counter()
    got = {
        "linear": growth_exponent(CountFunction.from_callable(math.floor, geometric_taus(8, 16384))),
        "torus": growth_exponent(torus_count_function(TorusPieceProfile.linear(), geometric_taus(8, 16384))),
        "lattice2": growth_exponent(lattice_count_function(2, geometric_taus(8, 16384))),
        "lattice3": growth_exponent(lattice_count_function(3, geometric_taus(8, 1024))),
        "exp": growth_exponent(CountFunction.from_callable(lambda t: math.floor(math.exp(t)),
                                                           geometric_taus(1, 512))),
    }
    dt = time.perf_counter() - t0
    want = {"linear": 1, "torus": 2, "lattice2": 2, "lattice3": 3}
    ok = all(abs(got[k] - v) <= 0.05 for k, v in want.items()) and got["exp"] == INF and dt < 5
    detail = ", ".join(f"{k} {v:.4f}" for k, v in got.items()) + f"; {dt:.2f}s"
    return ok, detail


def _ladder_pair(rng):
    deg = rng.randint(0, 4)
    D = rng.choice([2, 10])
    # integer constant term >= 1 keeps r nonzero, so degree 0 means exponent 0
    coefs = [Fraction(rng.randint(1, 9))] + [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(deg)]
    lam = Fraction(rng.randint(1, 100), 100) * (D - Fraction(1, D)) + Fraction(1, D)

    def r_plus(t):
        t = Fraction(t)
        return math.floor(sum(c * t ** i for i, c in enumerate(coefs)))

    def r_minus(t):
        return r_plus(lam * Fraction(t))
    return deg, D, r_plus, r_minus


@record(7, "ladder property")
def test_c07_ladder():
    rng = oracles.seeded("ladder")
    samples = geometric_taus(8, 2 ** 20 * 100)
    failures = []
    for i in range(1000):
        deg, D, rp, rm = _ladder_pair(rng)
        v = ladder_verify(CountFunction.from_callable(rp, samples), CountFunction.from_callable(rm, samples),
                          D, (8, 2 ** 20))
        if not v.ok or any(abs(g - deg) > 0.05 for g in v.exponents):
            failures.append((i, deg, D, v.reason, v.exponents))
    return not failures, f"{len(failures)} failures of 1000" + (f"; first {failures[0]}" if failures else "")


@record(8, "schedule gap vs ODE and exact thresholds")
def test_c08_schedule():
    rng = oracles.seeded("schedule")
    worst = 0.0
    problems = []
    for i in range(100):
        C = Fraction(rng.randint(1, 40), 10)
        L = Fraction(rng.randint(1, 30), 10)
        tp = Fraction(rng.randint(1, 1000), rng.randint(1, 10))
        b = schedule_gap(C, L)
        got = b.tau_minus(tp)
        want = oracles.integrate_decay(float(C), float(L), float(tp))
        rel = abs(got - want) / abs(want)
        worst = max(worst, rel)
        if rel > 1e-9:
            problems.append(f"case {i}: rel {rel:.2e}")
        # rational brackets around e^{LC} at 40 digits
        with mpmath.workdps(60):
            v = mpmath.exp(mpmath.mpf(L.numerator * C.numerator) / (L.denominator * C.denominator))
            lo = Fraction(int(mpmath.floor(v * 10 ** 40)), 10 ** 40)
        hi = lo + Fraction(1, 10 ** 40)
        if not (b.compare(lo) == 1 and b.compare(hi) == -1):
            problems.append(f"case {i}: bracket")
        if not (b.admissible(tp, tp * hi) and not b.admissible(tp, tp * lo)):
            problems.append(f"case {i}: admissibility")
        # an exactly representable threshold e^{LC} = m
        m = rng.randint(2, 50)
        e = schedule_gap(C, LogNumber.log(m) * (1 / C))
        if not (e.compare(m) == 0 and e.admissible(tp, m * tp) and not e.admissible(tp, m * tp - Fraction(1, 10 ** 12))):
            problems.append(f"case {i}: exact threshold {m}")
    return not problems, "; ".join(problems[:3]) or f"100 cases, worst rel {worst:.1e}, thresholds exact"


@record(9, "Novikov / Maurer-Cartan")
def test_c09_mc():
    t0 = time.perf_counter()
    problems = []
    for A in (Fraction(1), Fraction(1, 2), Fraction(7, 3)):
        cancel = DiscData.of([((1, 0), 1, A), ((-1, 0), 1, A)])
        v = essential_verdict(cancel, 20)
        if not (v.status == "essential" and v.mc.a == Deformation.zero()
                and v.mc.c == NovikovSeries.monomial(A, 2)):
            problems.append(f"cancellation A={A}: {v.status}")
        cliff = DiscData.of([((1, 0), 1, A), ((0, 1), 1, A)])
        w = essential_verdict(cliff, 20)
        if w.status != "not-essential":
            problems.append(f"clifford A={A}: {w.status}")
    rng = oracles.seeded("m0")
    bad = 0
    for _ in range(200):
        rows = []
        for _ in range(rng.randint(1, 3)):
            alpha = (rng.randint(-2, 2), rng.randint(-2, 2))
            if alpha == (0, 0):
                alpha = (0, 1)
            rows.append((alpha, rng.randint(-3, 3), Fraction(rng.randint(1, 12), rng.choice([1, 2, 3]))))
        a1 = oracles.random_positive_series(rng)
        a2 = oracles.random_positive_series(rng)
        got = m0(DiscData.of(rows), Deformation(NovikovSeries(a1), NovikovSeries(a2)), 6)
        if got.terms != oracles.mu_k_sum(rows, a1, a2, 6):
            bad += 1
    if bad:
        problems.append(f"m0 oracle: {bad} of 200")
    bad = 0
    for _ in range(500):
        a = NovikovSeries(oracles.random_positive_series(rng, max_terms=5))
        N = Fraction(rng.randint(1, 24), rng.choice([1, 2, 3]))
        if a.exp(N) * (-a).exp(N) != NovikovSeries.one(N):
            bad += 1
    if bad:
        problems.append(f"exp identity: {bad} of 500")
    dt = time.perf_counter() - t0
    if dt >= 10:
        problems.append(f"runtime {dt:.2f}s")
    return not problems, "; ".join(problems) or f"zero failures, {dt:.2f}s"


def _random_space(rng):
    dims = {rng.randint(-6, 6): rng.randint(1, 3) for _ in range(rng.randint(1, 4))}
    return GradedSpace(dims)


@record(10, "surgery rules")
def test_c10_surgery():
    rng = oracles.seeded("surgery")
    problems = []
    for i in range(100):
        a, b = Graded(_random_space(rng)), Graded(_random_space(rng))
        if sum_values(a, b) != sum_values(b, a):
            problems.append(f"csum {i}")
        lo = rng.randint(-12, 0)
        hi = lo + rng.randint(0, 12)
        p = product_values(a, b, (lo, hi))
        want = tensor_product(a.space, b.space).series(lo, hi)
        conv = {}
        for x, m in a.space.series().items():
            for y, n in b.space.series().items():
                if lo <= x + y <= hi:
                    conv[x + y] = conv.get(x + y, 0) + m * n
        if p.space.series(lo, hi) != conv or want != conv:
            problems.append(f"prod {i}")
    for src, n in (("ball(3)", 3), ("tstar_sphere(4)", 4), ("csum(surface(1), surface(2))", 1),
                   ("tstar_torus(2)", 2), ("prod(tstar_sphere(2), ball(2))", 4)):
        e = parse_expr(src)
        for k in range(n):
            if eval_sh(Handle(e, k)) != eval_sh(e):
                problems.append(f"handle {src} k={k}")
    for n in (3, 4, 5):
        v = sphere_vanishing(n)
        if v.status != "zero" or v.value != Zero() or v.max_rank != 1 or "rank = 0" not in v.trace[-1]:
            problems.append(f"sphere n={n}")
    for depth in range(2, 9):
        for base in (Graded(GradedSpace({0: 1})), NonzeroFlag("axiom")):
            if finite_type(base, depth).status != "infinite-type":
                problems.append(f"finite_type depth {depth}")
    return not problems, "; ".join(problems[:3]) or "all rules hold"


@record(11, "homology vs row-reduction oracle")
def test_c11_homology():
    rng = oracles.seeded("homology")
    failures = []
    for i in range(1000):
        total = rng.randint(1, 12)
        a = rng.randint(0, total)
        b = rng.randint(0, total - a)
        c = total - a - b
        d1, d2 = oracles.random_complex(rng, a, b, c)
        for p in (0, 2):
            F = Field(p)
            A, B, C = (GradedSpace({k: x}, field=F) for k, x in ((0, a), (1, b), (2, c)))
            Z = GradedSpace({}, field=F)
            m1 = GradedMap(A, B, 1, {0: d1} if a and b else {})
            m2 = GradedMap(B, C, 1, {1: d2} if b and c else {})
            r1, r2 = oracles.rank_oracle(d1, p), oracles.rank_oracle(d2, p)
            hA = homology(GradedMap(Z, A, 1, {}), m1).dim(0)
            hB = homology(m1, m2).dim(1)
            hC = homology(m2, GradedMap(C, Z, 1, {})).dim(2)
            if (hA, hB, hC) != (a - r1, b - r1 - r2, c - r2):
                failures.append((i, p))
    return not failures, f"{len(failures)} failures of 1000 complexes x 2 fields"


@record(12, "selftest determinism")
def test_c12_determinism():
    cmd = [sys.executable, "-m", "shcalc.cli", "selftest", "--seed", "2024", "--output", "json"]
    runs = [subprocess.run(cmd, capture_output=True, timeout=300) for _ in range(2)]
    codes = [r.returncode for r in runs]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    return same and codes == [0, 0], f"exit codes {codes}, identical {same}, {len(runs[0].stdout)} bytes"


ALL = [test_c01_ball, test_c02_surface, test_c03_tstar, test_c04_s2, test_c05_tower, test_c06_growth,
       test_c07_ladder, test_c08_schedule, test_c09_mc, test_c10_surgery, test_c11_homology,
       test_c12_determinism]


if __name__ == "__main__":
    failed = 0
    for k, t in enumerate(ALL, 1):
        ok, detail = t.check()
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] {k:2d}. {RESULTS[k][0]}: {detail}")
    sys.exit(1 if failed else 0)
