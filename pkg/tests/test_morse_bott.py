import pytest
from hypothesis import given, settings, strategies as st

from shcalc.algebra import GradedSpace, TailRule, point, shift, sphere, zero_space
from shcalc.linalg import Field
from shcalc.morse_bott import (UNIT_TANGENT_TABLE, BoundaryModel, ball_model, builtin_case,
                               e1_circle, e1_equivariant, e1_totals, e1_u_adic, parse_case,
                               s2_model, surface_model, tstar_sphere_model,
                               unit_tangent_cohomology, u_torsion_free_rank)
from shcalc.spectral import SpectralSystem, edge_data, run_pages

import oracles


def test_unit_tangent_table_matches_gysin_oracle():
    assert oracles.gysin_table(12) == UNIT_TANGENT_TABLE


@pytest.mark.parametrize("n", [13, 14, 20])
def test_unit_tangent_beyond_table(n):
    ranks = {}
    for d in oracles.gysin_table(n)[(n, False)]:
        ranks[d] = ranks.get(d, 0) + 1
    assert unit_tangent_cohomology(n).dims == ranks


def test_boundary_model_validation():
    with pytest.raises(ValueError):
        BoundaryModel(2, 3, point(), sphere(3))
    with pytest.raises(ValueError):
        BoundaryModel(1, 2, GradedSpace({3: 1}), sphere(1))


def test_ball_e1():
    pg = e1_circle(ball_model(3), window=(-16, 0))
    assert pg.totals() == {d: 1 for d in (-3, -4, -9, -10, -15, -16)}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ball_e1_default_window_follows_the_pattern(n):
    # -n, -n-1, -3n, -3n-1, -5n, ... continued through the window; a generator
    # whose d_1 partner falls outside is trimmed
    ss = builtin_case("ball", n)
    lo, hi = ss.initial.window
    want = {}
    for k in range(12):
        pair = (-(2 * k + 1) * n, -(2 * k + 1) * n - 1)
        if all(lo <= d <= hi for d in pair):
            want.update({d: 1 for d in pair})
    assert ss.initial.totals() == want
    assert len(want) == 10


def test_surface_e1():
    pg = e1_circle(surface_model(2), window=(-1, 12))
    assert pg.totals() == {-1: 1, 0: 4, 5: 1, 6: 1, 11: 1, 12: 1}


def test_tstar_sphere_e1():
    pg = e1_circle(tstar_sphere_model(4), columns=-2, window=(-20, 0))
    # H^*(S^4) shifted down 4; column p carries the unit bundle (degrees 0, 7) at e - 4 + 6p
    assert pg.column(0) == {-4: 1, 0: 1}
    assert pg.totals() == {0: 1, -4: 1, -10: 1, -3: 1, -16: 1, -9: 1}


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(-3, 3).map(lambda k: 2 * k), st.integers(-3, 0))
def test_e1_circle_support(n, mu, P):
    bm = BoundaryModel(n, mu, sphere(n), sphere(2 * n - 1))
    pg = e1_circle(bm, columns=P, window=(-15, 15))
    assert all(p <= 0 for p, _ in pg.entries)
    assert edge_data(SpectralSystem(pg)).column == {d: m for d, m in shift(bm.hM, -n).dims.items() if -15 <= d <= 15}


def test_e1_totals_tail_form():
    T = e1_totals(surface_model(1))
    assert T.window(-1, 6).dims == {-1: 1, 0: 2, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1}
    B = e1_totals(ball_model(2))
    assert B.window(-12, 0).dims == {-2: 1, -3: 1, -6: 1, -7: 1, -10: 1, -11: 1}
    with pytest.raises(ValueError):
        e1_totals(BoundaryModel(1, 0, point(), sphere(1)))


def test_e1_equivariant_s2():
    pg = e1_equivariant(s2_model(), columns=-5, window=(-11, 0))
    assert pg.dim(0, 0) == 1
    for q in range(-10, 0, 2):
        assert pg.dim(0, q) == 2
    for r in range(1, 6):
        assert pg.dim(-r, -r - 1) == 1 and pg.dim(-r, -r + 1) == 1


def test_e1_equivariant_edge_cases():
    bm = BoundaryModel(2, 2, zero_space(), sphere(3), point())
    pg = e1_equivariant(bm, columns=-4, window=(-12, 0))
    assert pg.column(0) == {}
    # quotient = point: single line q = 1 - n + p (mu - 1), by substitution
    n, mu = 2, 2
    for p in range(-4, 0):
        col = pg.column(p)
        assert col == {1 - n + p * (mu - 1): 1}
    with pytest.raises(ValueError):
        e1_equivariant(BoundaryModel(2, 2, point(), sphere(3)))
    with pytest.raises(ValueError):
        e1_equivariant(s2_model(Field(3)))


def test_e1_u_adic():
    diag = e1_u_adic(point(), columns=-3, window=(-6, 0))
    assert dict(diag.entries) == {(p, p): 1 for p in range(-3, 1)}
    assert e1_u_adic(zero_space()).is_zero()
    pg = e1_u_adic(GradedSpace({-1: 1, 0: 2}), columns=-2, window=(-6, 0))
    for p in range(-2, 1):
        assert pg.dim(p, p - 1) == 1 and pg.dim(p, p) == 2


def test_builtin_ball_vanishes():
    for n in (1, 2, 3, 4):
        assert run_pages(builtin_case("ball", n)).is_zero()


def test_builtin_surface_genus_one():
    final = run_pages(builtin_case("surface", 1))
    assert final.totals() == {-1: 1, 0: 2, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1}


def test_builtin_s2_final():
    final = run_pages(builtin_case("s2_equivariant", window=(-13, 0)))
    assert final.column(0) == {q: 1 for q in range(-12, 1, 2)}
    for r in range(1, 7):
        assert final.column(-r) == {-r + 1: 1}
    assert u_torsion_free_rank(final.column(0), (-12, 0)) == 1


def test_builtin_errors():
    with pytest.raises(ValueError):
        builtin_case("surface", 0)
    with pytest.raises(ValueError):
        builtin_case("klein")
    with pytest.raises(ValueError):
        parse_case("s2_equivariant(2)")
    assert parse_case(" ball( 3 ) ") == ("ball", 3)


def test_ball_d1_is_iso_on_trimmed_page():
    for n in (2, 3, 4):
        ss = builtin_case("ball", n)
        d = ss.differentials[0]
        pg = ss.initial
        sources = set(d.blocks)
        targets = {d.target(*s) for s in sources}
        assert sources | targets == set(pg.entries)
        assert not sources & targets
