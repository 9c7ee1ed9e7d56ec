import pytest
from hypothesis import given, settings, strategies as st

from shcalc.dsl import (Axiom, Ball, CSum, Handle, ParseError, Prod, Surface, TStarSphere,
                        TStarTorus, Tower, parse_expr, unparse)


def test_parse_examples():
    assert parse_expr("csum(ball(3), surface(2))") == CSum(Ball(3), Surface(2))
    h = parse_expr("handle(tstar_sphere(4), 2, -1)")
    assert h == Handle(TStarSphere(4), 2, -1) and h.framing == -1
    assert parse_expr("tower(axiom(ramanujam), 5)") == Tower(Axiom("ramanujam"), 5)
    assert parse_expr("  prod( tstar_torus(2) ,\n ball(1) ) ") == Prod(TStarTorus(2), Ball(1))
    assert parse_expr("handle(ball(3), 1)").framing == 0


def test_locations_recorded():
    e = parse_expr("csum(ball(3),\n  surface(2))")
    assert e.loc == (1, 1) and e.left.loc == (1, 6) and e.right.loc == (2, 3)


@pytest.mark.parametrize("src, line, col", [
    ("ball(0)", 1, 6),
    ("surface(-1)", 1, 9),
    ("ball(3", 1, 7),
    ("csum(ball(3) ball(2))", 1, 14),
    ("cone(3)", 1, 1),
    ("ball(3) x", 1, 9),
    ("tower(ball(2), 0)", 1, 16),
    ("axiom(Ramanujam)", 1, 7),
    ("csum(ball(3),\n  ball(2)$)", 2, 10),
    ("", 1, 1),
])
def test_parse_errors_carry_location(src, line, col):
    with pytest.raises(ParseError) as info:
        parse_expr(src)
    assert (info.value.line, info.value.col) == (line, col)
    assert str(info.value).startswith(f"{line}:{col}:")


leaves = st.one_of(
    st.builds(Ball, st.integers(1, 6)),
    st.builds(Surface, st.integers(1, 4)),
    st.builds(TStarSphere, st.integers(1, 6)),
    st.builds(TStarTorus, st.integers(1, 4)),
    st.builds(Axiom, st.sampled_from(["ramanujam", "point"])),
)
exprs = st.recursive(leaves, lambda kids: st.one_of(
    st.builds(CSum, kids, kids),
    st.builds(Prod, kids, kids),
    st.builds(Handle, kids, st.integers(0, 5), st.integers(-3, 3)),
    st.builds(Tower, kids, st.integers(1, 6)),
), max_leaves=8)


@settings(max_examples=150, deadline=None)
@given(exprs)
def test_unparse_round_trip(e):
    text = unparse(e)
    assert parse_expr(text) == e
    assert unparse(parse_expr(text)) == text
