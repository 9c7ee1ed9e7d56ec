"""Model expressions: AST and a recursive-descent parser.

Grammar (whitespace-insensitive, lowercase identifiers)::

    expr := ball(INT) | surface(INT) | tstar_sphere(INT) | tstar_torus(INT)
          | csum(expr, expr) | prod(expr, expr) | handle(expr, INT [, INT])
          | tower(expr, INT) | axiom(IDENT)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

Loc = tuple[int, int]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message, self.line, self.col = message, line, col


@dataclass(frozen=True)
class Ball:
    n: int
    loc: Loc | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Surface:
    g: int
    loc: Loc | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TStarSphere:
    n: int
    loc: Loc | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TStarTorus:
    n: int
    loc: Loc | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CSum:
    left: "SpaceExpr"
    right: "SpaceExpr"
    loc: Loc | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Prod:
    left: "SpaceExpr"
    right: "SpaceExpr"
    loc: Loc | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Handle:
    """Weinstein ``k``-handle; ``framing`` is the shift from the compatible framing."""

    base: "SpaceExpr"
    k: int
    framing: int = 0
    loc: Loc | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Tower:
    base: "SpaceExpr"
    depth: int
    loc: Loc | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Axiom:
    name: str
    loc: Loc | None = field(default=None, compare=False, repr=False)


SpaceExpr = Union[Ball, Surface, TStarSphere, TStarTorus, CSum, Prod, Handle, Tower, Axiom]

_INT_ARG = {"ball": (Ball, 1), "surface": (Surface, 1), "tstar_sphere": (TStarSphere, 1),
            "tstar_torus": (TStarTorus, 1)}
_BINARY = {"csum": CSum, "prod": Prod}
_KEYWORDS = set(_INT_ARG) | set(_BINARY) | {"handle", "tower", "axiom"}

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),])|(?P<bad>\S))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    line_starts = [0] + [m.end() for m in re.finditer(r"\n", src)]

    def where(pos):
        ln = max(i for i, s in enumerate(line_starts) if s <= pos)
        return ln + 1, pos - line_starts[ln] + 1

    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            break
        kind = m.lastgroup
        start = m.start(kind)
        ln, col = where(start)
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", ln, col)
        toks.append(_Tok(kind, m.group(kind), ln, col))
        pos = m.end()
    ln, col = where(len(src))
    toks.append(_Tok("eof", "", ln, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, text: str | None = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = repr(text) if text else kind
            got = repr(t.text) if t.text else "end of input"
            raise ParseError(f"expected {want}, got {got}", t.line, t.col)
        self.i += 1
        return t

    def integer(self, lo: int | None = None, what: str = "integer") -> int:
        t = self.take("int")
        v = int(t.text)
        if lo is not None and v < lo:
            raise ParseError(f"{what} must be >= {lo}, got {v}", t.line, t.col)
        return v

    def expr(self):
        t = self.take("ident")
        name = t.text
        loc = (t.line, t.col)
        if name not in _KEYWORDS:
            raise ParseError(f"unknown constructor {name!r}", t.line, t.col)
        self.take("punct", "(")
        if name in _INT_ARG:
            cls, lo = _INT_ARG[name]
            node = cls(self.integer(lo, "genus" if name == "surface" else "dimension"), loc=loc)
        elif name in _BINARY:
            left = self.expr()
            self.take("punct", ",")
            right = self.expr()
            node = _BINARY[name](left, right, loc=loc)
        elif name == "handle":
            base = self.expr()
            self.take("punct", ",")
            k = self.integer(0, "handle index")
            framing = 0
            if self.peek().text == ",":
                self.take("punct", ",")
                framing = self.integer()
            node = Handle(base, k, framing, loc=loc)
        elif name == "tower":
            base = self.expr()
            self.take("punct", ",")
            node = Tower(base, self.integer(1, "depth"), loc=loc)
        else:
            a = self.take("ident")
            if a.text != a.text.lower():
                raise ParseError("axiom names are lowercase", a.line, a.col)
            node = Axiom(a.text, loc=(a.line, a.col))
        self.take("punct", ")")
        return node


def parse_expr(src: str) -> SpaceExpr:
    """Parse one model expression; raises :class:`ParseError` with line and column."""
    p = _Parser(src)
    node = p.expr()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return node


def unparse(e: SpaceExpr) -> str:
    """Canonical text; ``parse_expr(unparse(e)) == e``."""
    if isinstance(e, Ball):
        return f"ball({e.n})"
    if isinstance(e, Surface):
        return f"surface({e.g})"
    if isinstance(e, TStarSphere):
        return f"tstar_sphere({e.n})"
    if isinstance(e, TStarTorus):
        return f"tstar_torus({e.n})"
    if isinstance(e, CSum):
        return f"csum({unparse(e.left)}, {unparse(e.right)})"
    if isinstance(e, Prod):
        return f"prod({unparse(e.left)}, {unparse(e.right)})"
    if isinstance(e, Handle):
        tail = f", {e.framing}" if e.framing else ""
        return f"handle({unparse(e.base)}, {e.k}{tail})"
    if isinstance(e, Tower):
        return f"tower({unparse(e.base)}, {e.depth})"
    if isinstance(e, Axiom):
        return f"axiom({e.name})"
    raise TypeError(f"not a model expression: {e!r}")
