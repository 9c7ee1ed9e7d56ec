"""Compositional evaluation of SH for model Liouville domains.

Values are one of :class:`Zero`, :class:`Graded`, :class:`NonzeroFlag`
(known nonzero, size unknown) or :class:`SymbolicCount` (one copy of a
graded piece per point of a lattice ``Z^n``, e.g. the components of the
free loop space of a torus).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Mapping, Sequence, Union

from . import dsl
from .algebra import (BACKWARD, DirectedSystem, GradedMap, GradedSpace, WindowRequired,
                      direct_sum, inverse_limit, point, sphere, tensor_product)
from .linalg import QQ, Field
from .morse_bott import BoundaryModel, e1_circle, e1_totals, surface_model, tstar_sphere_model
from .reeb_growth import CountFunction, lattice_count


class EvalError(ValueError):
    pass


class NotSubcritical(EvalError):
    pass


# ---------------------------------------------------------------------------
# values


@dataclass(frozen=True)
class Zero:
    def describe(self) -> str:
        return "SH = 0"

    def as_dict(self):
        return {"kind": "zero"}


@dataclass(frozen=True)
class Graded:
    space: GradedSpace

    def __post_init__(self):
        if self.space.is_zero():
            raise ValueError("a zero space is the Zero value")

    def describe(self) -> str:
        return f"SH = {_describe_space(self.space)}"

    def as_dict(self):
        return {"kind": "graded", "space": _space_dict(self.space)}


@dataclass(frozen=True)
class NonzeroFlag:
    reason: str = dc_field(default="", compare=False)

    def describe(self) -> str:
        return f"SH != 0 ({self.reason})" if self.reason else "SH != 0"

    def as_dict(self):
        return {"kind": "nonzero", "reason": self.reason}


@dataclass(frozen=True)
class SymbolicCount:
    """``sum_i  Z^{n_i} x component_i``: one copy of each component per lattice point."""

    parts: tuple[tuple[int, GradedSpace], ...]

    def __post_init__(self):
        merged: dict[int, GradedSpace] = {}
        for n, V in self.parts:
            if n < 0:
                raise ValueError("lattice rank must be nonnegative")
            if V.is_zero():
                continue
            merged[n] = direct_sum(merged[n], V) if n in merged else V
        if not any(n > 0 for n in merged):
            raise ValueError("no lattice part: use Graded")
        object.__setattr__(self, "parts", tuple(sorted(merged.items(), key=lambda x: x[0])))

    @property
    def lattice_rank(self) -> int:
        return max(n for n, _ in self.parts)

    def rank(self, d: int):
        """Dimension in degree ``d``: infinite if some lattice part meets it."""
        if any(n > 0 and V.dim(d) for n, V in self.parts):
            return float("inf")
        return sum(V.dim(d) for n, V in self.parts)

    def count(self, tau) -> int:
        """Classes coming from lattice points of length ``< tau``."""
        total = 0
        for n, V in self.parts:
            if not V.finite:
                raise WindowRequired("count function of an infinite component")
            pts = 1 if n == 0 else lattice_count(n, tau) + 1
            total += pts * V.total_dim
        return total

    def count_function(self, taus) -> CountFunction:
        return CountFunction.from_callable(self.count, taus)

    def describe(self) -> str:
        body = " + ".join(f"Z^{n} x [{_describe_space(V)}]" if n else _describe_space(V)
                          for n, V in self.parts)
        return f"SH = {body}"

    def as_dict(self):
        return {"kind": "symbolic", "parts": [{"lattice_rank": n, "component": _space_dict(V)}
                                              for n, V in self.parts]}


SHValue = Union[Zero, Graded, NonzeroFlag, SymbolicCount]


def graded(V: GradedSpace) -> SHValue:
    return Zero() if V.is_zero() else Graded(V)


def _describe_space(V: GradedSpace) -> str:
    parts = [f"{n}@{d}" for d, n in sorted(V.dims.items())]
    for t in V.tails:
        parts.append(f"{t.rank}@{t.start}{'+' if t.step > 0 else '-'}{abs(t.step)}k")
    return " ".join(parts) if parts else "0"


def _space_dict(V: GradedSpace):
    return {"field": str(V.field), "grading": V.grading,
            "dims": {str(d): n for d, n in sorted(V.dims.items())},
            "tails": [[t.start, t.step, t.rank] for t in V.tails]}


def sum_values(a: SHValue, b: SHValue) -> SHValue:
    if isinstance(a, Zero):
        return b
    if isinstance(b, Zero):
        return a
    if isinstance(a, NonzeroFlag) or isinstance(b, NonzeroFlag):
        return a if isinstance(a, NonzeroFlag) else b
    pa = a.parts if isinstance(a, SymbolicCount) else ((0, a.space),)
    pb = b.parts if isinstance(b, SymbolicCount) else ((0, b.space),)
    if isinstance(a, Graded) and isinstance(b, Graded):
        return Graded(direct_sum(a.space, b.space))
    return SymbolicCount(pa + pb)


def product_values(a: SHValue, b: SHValue, window: tuple[int, int] | None = None) -> SHValue:
    """Kunneth over a field."""
    if isinstance(a, Zero) or isinstance(b, Zero):
        return Zero()
    if isinstance(a, NonzeroFlag) or isinstance(b, NonzeroFlag):
        return NonzeroFlag("product of nonzero factors over a field")
    if isinstance(a, Graded) and isinstance(b, Graded):
        return graded(tensor_product(a.space, b.space, window))
    pa = a.parts if isinstance(a, SymbolicCount) else ((0, a.space),)
    pb = b.parts if isinstance(b, SymbolicCount) else ((0, b.space),)
    return SymbolicCount(tuple((m + n, tensor_product(V, W, window)) for m, V in pa for n, W in pb))


# ---------------------------------------------------------------------------
# handles and framings


def chern_after_framing(c: int, m: int) -> int:
    """Chern number on the new class after changing the framing by ``m``."""
    return c + m


def framing_fix(obstruction: int) -> int:
    """The unique framing shift that kills a Maslov obstruction."""
    return -obstruction


@dataclass(frozen=True)
class HandleRecord:
    k: int
    framing_shift: int
    chern_on_A: int | None
    note: str

    def as_dict(self):
        return {"k": self.k, "framing_shift": self.framing_shift,
                "chern_on_A": self.chern_on_A, "note": self.note}


def handle_record(k: int, framing: int) -> HandleRecord:
    if k == 1:
        if framing:
            raise EvalError("1-handles have no framing choice")
        return HandleRecord(1, 0, None, "trivialization extends over the handle, not uniquely")
    if k == 2:
        c = chern_after_framing(0, framing)
        if c:
            note = f"Z grading needs framing shift {framing_fix(c)} more; value holds Z/2-graded"
        else:
            note = "framing kills the Maslov obstruction"
        return HandleRecord(2, framing, c, note)
    return HandleRecord(k, framing, None, "no grading obstruction")


def cancel(e: dsl.SpaceExpr) -> dsl.SpaceExpr:
    """``handle(handle(x, k), k + 1) -> x`` when both framings are the compatible ones."""
    if (isinstance(e, dsl.Handle) and e.framing == 0 and isinstance(e.base, dsl.Handle)
            and e.base.framing == 0 and e.k == e.base.k + 1):
        return e.base.base
    return e


# ---------------------------------------------------------------------------
# evaluation

AXIOMS: dict[str, tuple[int, str]] = {
    "ramanujam": (2, "nonvanishing SH of Ramanujam's contractible surface"),
    "point": (0, "zero-dimensional unit for products"),
}


def _axiom_value(name: str, field: Field) -> SHValue:
    if name == "ramanujam":
        return NonzeroFlag(AXIOMS[name][1])
    return Graded(point(0, field))


def dimension(e: dsl.SpaceExpr) -> int:
    """Half the real dimension of the model."""
    if isinstance(e, (dsl.Ball, dsl.TStarSphere, dsl.TStarTorus)):
        return e.n
    if isinstance(e, dsl.Surface):
        return 1
    if isinstance(e, dsl.CSum):
        a, b = dimension(e.left), dimension(e.right)
        if a != b:
            raise EvalError(f"boundary connected sum of dimensions {2 * a} and {2 * b}")
        return a
    if isinstance(e, dsl.Prod):
        return dimension(e.left) + dimension(e.right)
    if isinstance(e, (dsl.Handle, dsl.Tower)):
        return dimension(e.base)
    if isinstance(e, dsl.Axiom):
        if e.name not in AXIOMS:
            raise EvalError(f"unknown axiom {e.name!r}; known: {', '.join(sorted(AXIOMS))}")
        return AXIOMS[e.name][0]
    raise TypeError(f"not a model expression: {e!r}")


def torus_component(n: int, field: Field = QQ) -> GradedSpace:
    """One free-loop component of T^n in SH degrees: ``H_{n-d}(T^n)``."""
    return GradedSpace({d: comb(n, d) for d in range(n + 1)}, field=field)


@dataclass
class Evaluation:
    value: SHValue
    n: int
    trace: list[str] = dc_field(default_factory=list)
    handles: list[HandleRecord] = dc_field(default_factory=list)

    def as_dict(self):
        return {"value": self.value.as_dict(), "n": self.n, "trace": list(self.trace),
                "handles": [h.as_dict() for h in self.handles]}


def evaluate(e: dsl.SpaceExpr, field: Field = QQ, window: tuple[int, int] | None = None
             ) -> Evaluation:
    ev = Evaluation(Zero(), dimension(e))
    ev.value = _eval(e, field, window, ev)
    return ev


def eval_sh(e: dsl.SpaceExpr, field: Field = QQ, window: tuple[int, int] | None = None) -> SHValue:
    return evaluate(e, field, window).value


def _eval(e, field, window, ev: Evaluation) -> SHValue:
    text = dsl.unparse(e)
    if isinstance(e, dsl.Ball):
        ev.trace.append(f"{text}: d_1 pairs all generators, SH = 0")
        return Zero()
    if isinstance(e, dsl.Surface):
        v = Graded(e1_totals(surface_model(e.g, field)))
        ev.trace.append(f"{text}: spectral sequence degenerates, SH = H^(*+1) plus circle copies")
        return v
    if isinstance(e, dsl.TStarSphere):
        if e.n == 1:
            ev.trace.append(f"{text}: the cylinder, evaluated as tstar_torus(1)")
            return _eval(dsl.TStarTorus(1), field, window, ev)
        ev.trace.append(f"{text}: E_1 totals (the sequence degenerates)")
        return Graded(e1_totals(tstar_sphere_model(e.n, field)))
    if isinstance(e, dsl.TStarTorus):
        ev.trace.append(f"{text}: free loop space, one H_*(T^{e.n}) per class in Z^{e.n}")
        return SymbolicCount(((e.n, torus_component(e.n, field)),))
    if isinstance(e, dsl.CSum):
        dimension(e)
        v = sum_values(_eval(e.left, field, window, ev), _eval(e.right, field, window, ev))
        ev.trace.append(f"{text}: direct sum")
        return v
    if isinstance(e, dsl.Prod):
        v = product_values(_eval(e.left, field, window, ev), _eval(e.right, field, window, ev),
                           window)
        ev.trace.append(f"{text}: Kunneth")
        return v
    if isinstance(e, dsl.Handle):
        c = cancel(e)
        if c is not e:
            ev.trace.append(f"{text}: cancelling pair removed")
            return _eval(c, field, window, ev)
        n = dimension(e.base)
        if not 0 <= e.k < n:
            raise NotSubcritical(f"{text}: index {e.k} is not subcritical in dimension {2 * n}")
        rec = handle_record(e.k, e.framing)
        ev.handles.append(rec)
        v = _eval(e.base, field, window, ev)
        ev.trace.append(f"{text}: subcritical, SH unchanged ({rec.note})")
        return v
    if isinstance(e, dsl.Tower):
        base = _eval(e.base, field, window, ev)
        v = base
        for _ in range(e.depth - 1):
            v = sum_values(v, v)
        if isinstance(v, NonzeroFlag):
            v = NonzeroFlag(f"tower of depth {e.depth} over a nonzero base")
        probe = base
        if isinstance(base, Graded) and not base.space.finite and window is None:
            probe = NonzeroFlag("unbounded base")
        ft = finite_type(probe, max(e.depth, 2), window=window)
        ev.trace.append(f"{text}: stage {e.depth} = 2^{e.depth - 1} copies; {ft.status}")
        return v
    if isinstance(e, dsl.Axiom):
        dimension(e)
        ev.trace.append(f"{text}: axiom, {AXIOMS[e.name][1]}")
        return _axiom_value(e.name, field)
    raise TypeError(f"not a model expression: {e!r}")


# ---------------------------------------------------------------------------
# towers


@dataclass(frozen=True)
class FiniteTypeVerdict:
    """``status`` is ``"finite-type"`` (with ``k``), ``"infinite-type"`` or ``"trivial"``."""

    status: str
    depth: int
    k: int | None = None
    trace: tuple[str, ...] = ()

    def as_dict(self):
        return {"status": self.status, "depth": self.depth, "k": self.k, "trace": list(self.trace)}


def _base_space(base, window) -> GradedSpace | None:
    if isinstance(base, GradedSpace):
        V = base
    elif isinstance(base, Zero):
        return None
    elif isinstance(base, Graded):
        V = base.space
    else:
        # only nonvanishing matters; a single class witnesses it
        return GradedSpace({0: 1}, labels={0: ["w"]})
    if not V.finite:
        if window is None:
            raise WindowRequired("unbounded base needs a window")
        V = V.window(*window)
    return None if V.is_zero() else V


def _first_summand(V: GradedSpace, copies: int) -> GradedMap:
    """Projection from ``V^{2 copies}`` (as built by ``direct_sum``) to ``V^{copies}``."""
    big = V
    for _ in range(copies.bit_length() - 1):
        big = direct_sum(big, big)
    small = big
    big = direct_sum(big, big)
    blocks = {}
    for d, m in small.dims.items():
        blocks[d] = [[1 if j == i else 0 for j in range(2 * m)] for i in range(m)]
    return GradedMap(big, small, 0, blocks)


def finite_type(base, depth: int, mode: str = "mclean", window: tuple[int, int] | None = None
                ) -> FiniteTypeVerdict:
    """Truncated inverse system of a tower and the injectivity test.

    ``mode="mclean"``: ``V_k = base^(2^(k-1))`` with projections to the
    first summand.  ``mode="identity"``: a constant system (control input).
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    if mode not in ("mclean", "identity"):
        raise ValueError(f"unknown mode {mode!r}")
    V = _base_space(base, window)
    if V is None:
        return FiniteTypeVerdict("trivial", depth, trace=("every stage is zero",))
    stages, maps = [V], []
    for k in range(1, depth):
        if mode == "identity":
            stages.append(V)
            maps.append(GradedMap.identity(V))
        else:
            f = _first_summand(V, 2 ** (k - 1))
            stages.append(f.source)
            maps.append(f)
    limit, proj = inverse_limit(DirectedSystem(tuple(stages), tuple(maps), BACKWARD))
    trace = []
    for k in range(1, depth):
        p = proj[k - 1]
        kernel = sum(limit.dim(d) - p.rank(d) for d in limit.dims)
        trace.append(f"limit -> V_{k}: kernel dimension {kernel}")
        if kernel == 0:
            return FiniteTypeVerdict("finite-type", depth, k, tuple(trace))
    return FiniteTypeVerdict("infinite-type", depth, None, tuple(trace))


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class OpDegree:
    chi: int
    shift: int
    note: str = ""

    def as_dict(self):
        return {"chi": self.chi, "shift": self.shift, "note": self.note}


def op_degree(p: int, q: int, g: int, n: int, d: int = 0, equivariant: bool = False) -> OpDegree:
    """Degree shift of the operation from a genus ``g`` surface with ``p`` inputs and ``q`` outputs.

    The shift is ``-n chi - d`` with ``chi = 2 - 2g - p - q`` and ``d`` the
    dimension of a parameter family.
    """
    if p <= 0:
        raise ValueError("at least one input puncture is required")
    if q < 0 or g < 0 or d < 0:
        raise ValueError("q, g and d must be nonnegative")
    chi = 2 - 2 * g - p - q
    note = ""
    if equivariant:
        note = f"equivariant convention: bracket on SH_eq[{n - 2}], raw shift reported unchanged"
    return OpDegree(chi, -n * chi - d, note)


# ---------------------------------------------------------------------------
# spheres


@dataclass(frozen=True)
class DoublingResult:
    status: str
    witness: int | None = None
    message: str = ""


def doubling_rule(bounds: Mapping[int, int]) -> DoublingResult:
    """``rank(V + V) <= b`` in every degree with ``b <= 1`` forces ``V = 0``.

    ``bounds`` are per-degree upper bounds valid for ``V`` and for ``V + V``.
    """
    for d in sorted(bounds):
        if bounds[d] >= 2:
            return DoublingResult("contradiction", d,
                                  f"bound {bounds[d]} in degree {d}: 2 rank <= {bounds[d]} does not force 0")
    return DoublingResult("zero", None, "2 rank <= 1 in every degree, so rank = 0")


@dataclass(frozen=True)
class SphereVerdict:
    status: str
    value: SHValue | None
    max_rank: int
    trace: tuple[str, ...]

    def as_dict(self):
        return {"status": self.status, "value": None if self.value is None else self.value.as_dict(),
                "max_rank": self.max_rank, "trace": list(self.trace)}


def sphere_vanishing(n: int, window: tuple[int, int] | None = None) -> SphereVerdict:
    """SH of a filling of the standard contact sphere S^{2n-1}, n >= 3."""
    if n < 3:
        raise ValueError("needs n >= 3")
    lo, hi = window if window is not None else (min(-40, -4 * n), 0)
    trace = [f"filling is acyclic: H^*(M) = point, boundary S^{2 * n - 1}, mu = {2 * n}"]
    if not lo <= -n <= hi or hi - lo + 1 < 2 * n:
        trace.append(f"window [{lo}, {hi}] must contain {-n} and a full period {2 * n}")
        return SphereVerdict("unknown", None, 0, tuple(trace))
    bm = BoundaryModel(n, 2 * n, point(0), sphere(2 * n - 1))
    totals = e1_circle(bm, window=(lo, hi)).totals()
    mx = max(totals.values(), default=0)
    trace.append(f"E_1 totals on [{lo}, {hi}]: {len(totals)} nonzero degrees, max rank {mx}")
    residues = sorted({d % (2 * n) for d in totals})
    trace.append(f"totals lie in residues {residues} mod {2 * n}, one class per residue per column")
    if mx > 1 or len(residues) > 2:
        trace.append("rank bound <= 1 fails")
        return SphereVerdict("unknown", None, mx, tuple(trace))
    trace.append("rank SH^k <= 1 for all k; the same bound holds for M #_b M")
    res = doubling_rule(totals)
    trace.append(f"SH(M #_b M) = SH(M) + SH(M): {res.message}")
    if res.status != "zero":
        return SphereVerdict("contradiction", None, mx, tuple(trace))
    return SphereVerdict("zero", Zero(), mx, tuple(trace))
