"""Graded vector spaces, homogeneous maps, homology and (co)limits.

Everything here is dimension bookkeeping plus exact matrices.  A
:class:`GradedSpace` may carry *tail rules*: arithmetic progressions of
degrees with constant rank, used for the infinitely supported answers
(surfaces, cotangent bundles of spheres).  Labels are descriptive only and
never take part in equality.
"""

from __future__ import annotations

from collections import defaultdict
from functools import reduce
from math import gcd
from dataclasses import dataclass, field as dc_field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .linalg import QQ, Field, Matrix, is_zero, matmul, rank, zeros, identity

Z = "Z"
Z2 = "Z/2"


class GradingError(ValueError):
    pass


class NotAComplex(ValueError):
    pass


class WindowRequired(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TailRule:
    """Rank ``rank`` in every degree ``start + k*step``, ``k >= 0``."""

    start: int
    step: int
    rank: int = 1

    def __post_init__(self):
        if self.step == 0:
            raise ValueError("tail step must be nonzero")
        if self.rank <= 0:
            raise ValueError("tail rank must be positive")

    def hits(self, d: int) -> bool:
        k, rem = divmod(d - self.start, self.step)
        return rem == 0 and k >= 0

    def degrees(self, lo: int, hi: int) -> list[int]:
        return [d for d in range(lo, hi + 1) if self.hits(d)]

    @property
    def upward(self) -> bool:
        return self.step > 0


def _freeze(mapping):
    return MappingProxyType(dict(mapping))


class GradedSpace:
    """Finitely supported degree -> dimension map, plus optional tails.

    >>> V = GradedSpace({0: 1, 1: 1})
    >>> V.dim(1), V.total_dim
    (1, 2)
    """

    __slots__ = ("field", "grading", "_dims", "_labels", "tails")

    def __init__(self, dims: Mapping[int, int] | None = None, *, field: Field = QQ,
                 grading: str = Z, labels: Mapping[int, Sequence[str]] | None = None,
                 tails: Iterable[TailRule] = ()):
        if grading not in (Z, Z2):
            raise GradingError(f"unknown grading {grading!r}")
        clean = {}
        for d, n in (dims or {}).items():
            d, n = int(d), int(n)
            if n < 0:
                raise ValueError(f"negative dimension {n} in degree {d}")
            if n:
                clean[d] = n
        tails = tuple(tails)
        if grading == Z2:
            if any(d not in (0, 1) for d in clean):
                raise GradingError("Z/2-graded support must lie in {0, 1}")
            if tails:
                raise GradingError("tails need a Z grading")
        lab = {}
        for d, ls in (labels or {}).items():
            ls = tuple(str(x) for x in ls)
            if not ls:
                continue
            if len(set(ls)) != len(ls):
                raise ValueError(f"duplicate labels in degree {d}")
            if len(ls) != clean.get(int(d), 0):
                raise ValueError(f"{len(ls)} labels for dimension {clean.get(int(d), 0)} in degree {d}")
            if any(not x or any(c.isspace() for c in x) for x in ls):
                raise ValueError("labels must be nonempty and whitespace-free")
            lab[int(d)] = ls
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "grading", grading)
        dims_n, tails_n = _normalize(clean, tails)
        if tails_n != tuple(sorted(tails)):
            lab = {d: ls for d, ls in lab.items() if dims_n.get(d) == len(ls)}
        object.__setattr__(self, "_dims", _freeze(dims_n))
        object.__setattr__(self, "_labels", _freeze(lab))
        object.__setattr__(self, "tails", tails_n)

    def __setattr__(self, name, value):
        raise AttributeError("GradedSpace is immutable")

    # -- queries ---------------------------------------------------------

    @property
    def dims(self) -> Mapping[int, int]:
        """The explicit (finite) part; tails excluded."""
        return self._dims

    @property
    def labels(self) -> Mapping[int, tuple[str, ...]]:
        return self._labels

    def dim(self, d: int) -> int:
        return self._dims.get(d, 0) + sum(t.rank for t in self.tails if t.hits(d))

    @property
    def finite(self) -> bool:
        return not self.tails

    @property
    def total_dim(self):
        return float("inf") if self.tails else sum(self._dims.values())

    def is_zero(self) -> bool:
        return not self._dims and not self.tails

    def support(self) -> list[int]:
        if self.tails:
            raise WindowRequired("infinite support; use window()")
        return sorted(self._dims)

    def bounds(self) -> tuple[float, float]:
        """Smallest and largest degree carrying a class (may be infinite)."""
        lo = min(self._dims, default=float("inf"))
        hi = max(self._dims, default=float("-inf"))
        for t in self.tails:
            if t.upward:
                lo, hi = min(lo, t.start), float("inf")
            else:
                lo, hi = float("-inf"), max(hi, t.start)
        return lo, hi

    def window(self, lo: int, hi: int) -> "GradedSpace":
        """Finite space agreeing with ``self`` on degrees ``lo..hi``."""
        dims = {d: self.dim(d) for d in range(lo, hi + 1)}
        labels = {d: ls for d, ls in self._labels.items() if lo <= d <= hi
                  and len(ls) == dims[d]}
        return GradedSpace(dims, field=self.field, grading=self.grading, labels=labels)

    def series(self, lo: int | None = None, hi: int | None = None) -> dict[int, int]:
        """Poincaré series as a degree -> coefficient dict."""
        if self.tails:
            if lo is None or hi is None:
                raise WindowRequired("Poincaré series of an infinite space needs a window")
            return {d: n for d, n in self.window(lo, hi)._dims.items()}
        return {d: n for d, n in self._dims.items()
                if (lo is None or d >= lo) and (hi is None or d <= hi)}

    def euler_characteristic(self) -> int:
        if self.tails:
            raise WindowRequired("infinite space")
        return sum((-1) ** (d % 2) * n for d, n in self._dims.items())

    def basis_labels(self, d: int) -> tuple[str, ...]:
        if d in self._labels:
            return self._labels[d]
        return tuple(f"e{d}_{i}" for i in range(self.dim(d)))

    # -- identity --------------------------------------------------------

    def _key(self):
        return (self.field, self.grading, tuple(sorted(self._dims.items())), self.tails)

    def __eq__(self, other):
        if not isinstance(other, GradedSpace):
            return NotImplemented
        if self.field != other.field or self.grading != other.grading:
            return False
        if not self.tails and not other.tails:
            return self._dims == other._dims
        # both sides are eventually periodic; one full period past every
        # finite class and tail start decides equality everywhere
        steps = [abs(t.step) for t in self.tails + other.tails]
        period = reduce(lambda a, b: a * b // gcd(a, b), steps, 1)
        marks = [*self._dims, *other._dims] + [t.start for t in self.tails + other.tails]
        lo, hi = min(marks) - period, max(marks) + period
        return all(self.dim(d) == other.dim(d) for d in range(lo, hi + 1))

    def __hash__(self):
        if self.tails:
            return hash((self.field, self.grading, "tails",
                         frozenset(t.upward for t in self.tails)))
        return hash(self._key())

    def __repr__(self):
        parts = [f"{dict(sorted(self._dims.items()))}"]
        if self.tails:
            parts.append(f"tails={list(self.tails)}")
        if self.grading != Z:
            parts.append(f"grading={self.grading!r}")
        if self.field != QQ:
            parts.append(f"field={self.field}")
        return f"GradedSpace({', '.join(parts)})"

    # -- serialization ---------------------------------------------------

    def dumps(self) -> str:
        """Structured-text form; :func:`loads` inverts it exactly."""
        lines = [f"field {self.field}", f"grading {self.grading}"]
        for t in self.tails:
            lines.append(f"tail {t.start} {t.step} {t.rank}")
        for d in sorted(self._dims):
            rec = [str(d), str(self._dims[d])]
            rec.extend(self._labels.get(d, ()))
            lines.append(" ".join(rec))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "GradedSpace":
        field, grading = QQ, Z
        dims, labels, tails = {}, {}, []
        for ln, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            if tok[0] == "field":
                field = Field.parse(tok[1])
            elif tok[0] == "grading":
                grading = tok[1]
            elif tok[0] == "tail":
                tails.append(TailRule(int(tok[1]), int(tok[2]), int(tok[3])))
            else:
                try:
                    d, n = int(tok[0]), int(tok[1])
                except (ValueError, IndexError):
                    raise ValueError(f"line {ln}: bad record {line!r}") from None
                if d in dims:
                    raise ValueError(f"line {ln}: degree {d} repeated")
                dims[d] = n
                if len(tok) > 2:
                    labels[d] = tok[2:]
        return cls(dims, field=field, grading=grading, labels=labels, tails=tails)


def _normalize(dims: dict[int, int], tails: tuple[TailRule, ...]):
    """Merge coincident tails and absorb finite classes that extend a tail backwards."""
    if not tails:
        return dims, ()
    merged = defaultdict(int)
    for t in tails:
        merged[(t.start, t.step)] += t.rank
    dims = dict(dims)
    out = []
    for (start, step), r in merged.items():
        while dims.get(start - step, 0) >= r:
            start -= step
            dims[start] -= r
            if not dims[start]:
                del dims[start]
        out.append(TailRule(start, step, r))
    return dims, tuple(sorted(out))


def point(degree: int = 0, field: Field = QQ) -> GradedSpace:
    """A single class in ``degree``."""
    return GradedSpace({degree: 1}, field=field)


def zero_space(field: Field = QQ, grading: str = Z) -> GradedSpace:
    return GradedSpace({}, field=field, grading=grading)


def sphere(k: int, field: Field = QQ) -> GradedSpace:
    """Cohomology of the k-sphere."""
    if k == 0:
        return GradedSpace({0: 2}, field=field)
    return GradedSpace({0: 1, k: 1}, field=field)


def _check_compatible(V: GradedSpace, W: GradedSpace):
    if V.field != W.field:
        raise ValueError(f"field mismatch: {V.field} vs {W.field}")
    if V.grading != W.grading:
        raise GradingError(f"grading mismatch: {V.grading} vs {W.grading}")


def shift(V: GradedSpace, s: int) -> GradedSpace:
    """Shift up by ``s``: a class in degree 0 lands in degree ``s``."""
    if V.grading == Z2:
        if s % 2 == 0:
            return V
        return GradedSpace({1 - d: n for d, n in V.dims.items()}, field=V.field,
                           grading=Z2, labels={1 - d: l for d, l in V.labels.items()})
    return GradedSpace({d + s: n for d, n in V.dims.items()}, field=V.field,
                       labels={d + s: l for d, l in V.labels.items()},
                       tails=[TailRule(t.start + s, t.step, t.rank) for t in V.tails])


def collapse_z2(V: GradedSpace) -> GradedSpace:
    """Reduce a finite Z-graded space to its Z/2 grading."""
    if V.grading == Z2:
        return V
    if V.tails:
        raise WindowRequired("cannot collapse an infinite space to Z/2")
    dims = defaultdict(int)
    for d, n in V.dims.items():
        dims[d % 2] += n
    return GradedSpace(dims, field=V.field, grading=Z2)


def direct_sum(V: GradedSpace, W: GradedSpace) -> GradedSpace:
    _check_compatible(V, W)
    dims = defaultdict(int)
    for d, n in V.dims.items():
        dims[d] += n
    for d, n in W.dims.items():
        dims[d] += n
    labels = {}
    for d in dims:
        lv, lw = V.labels.get(d), W.labels.get(d)
        if (lv or not V.dims.get(d)) and (lw or not W.dims.get(d)) and (lv or lw):
            merged = tuple(f"0.{x}" for x in lv or ()) + tuple(f"1.{x}" for x in lw or ())
            labels[d] = merged
    return GradedSpace(dims, field=V.field, grading=V.grading, labels=labels,
                       tails=V.tails + W.tails)


def _side(V: GradedSpace):
    lo, hi = V.bounds()
    return lo != float("-inf"), hi != float("inf")


def tensor_product(V: GradedSpace, W: GradedSpace, window: tuple[int, int] | None = None
                   ) -> GradedSpace:
    """Graded tensor product; dims convolve, Poincaré series multiply.

    If at least one factor is finite the answer is exact (tails shift).
    When both carry tails they must be bounded on a common side and
    ``window`` picks the degrees to materialize; the result is the finite
    restriction to that window.
    """
    _check_compatible(V, W)
    if V.grading == Z2:
        dims = defaultdict(int)
        for a, m in V.dims.items():
            for b, n in W.dims.items():
                dims[(a + b) % 2] += m * n
        return GradedSpace(dims, field=V.field, grading=Z2)
    if V.finite and W.finite:
        dims = defaultdict(int)
        for a, m in V.dims.items():
            for b, n in W.dims.items():
                dims[a + b] += m * n
        return GradedSpace(dims, field=V.field)
    if V.is_zero() or W.is_zero():
        return zero_space(V.field)
    if V.finite or W.finite:
        # exact: every class of the finite factor shifts a copy of the other
        fin, inf = (V, W) if V.finite else (W, V)
        dims = defaultdict(int)
        tails = []
        for b, m in fin.dims.items():
            for a, n in inf.dims.items():
                dims[a + b] += m * n
            tails.extend(TailRule(t.start + b, t.step, t.rank * m) for t in inf.tails)
        return GradedSpace(dims, field=V.field, tails=tails)
    vlo, vhi = _side(V)
    wlo, whi = _side(W)
    if not ((vlo and wlo) or (vhi and whi)):
        raise WindowRequired("factors unbounded in opposite directions: infinite rank per degree")
    if window is None:
        raise WindowRequired("tensor product of infinite spaces needs a window")
    lo, hi = window
    (a_lo, a_hi), (b_lo, b_hi) = V.bounds(), W.bounds()
    dims = {}
    for d in range(lo, hi + 1):
        if vlo and wlo:
            rng = range(int(a_lo), int(d - b_lo) + 1)
        else:
            rng = range(int(d - b_hi), int(a_hi) + 1)
        dims[d] = sum(V.dim(a) * W.dim(d - a) for a in rng)
    return GradedSpace(dims, field=V.field)


# ---------------------------------------------------------------------------
# Maps


class GradedMap:
    """Homogeneous map of degree ``shift``.

    ``blocks[d]`` is the matrix from degree ``d`` of the source to degree
    ``d + shift`` of the target (rows = target dimension).  Missing blocks
    are zero.
    """

    __slots__ = ("source", "target", "shift", "blocks")

    def __init__(self, source: GradedSpace, target: GradedSpace, shift: int = 0,
                 blocks: Mapping[int, Sequence[Sequence]] | None = None):
        _check_compatible(source, target)
        if not (source.finite and target.finite):
            raise WindowRequired("maps are only defined between finite spaces")
        F = source.field
        clean = {}
        for d, m in (blocks or {}).items():
            rows, cols = target.dim(d + shift), source.dim(d)
            m = F.matrix(m)
            if rows == 0 or cols == 0:
                if any(len(r) for r in m) or len(m) not in (0, rows):
                    raise ValueError(f"block at degree {d}: expected {rows}x{cols}")
                continue
            if len(m) != rows or any(len(r) != cols for r in m):
                raise ValueError(f"block at degree {d}: expected {rows}x{cols}, "
                                 f"got {len(m)}x{len(m[0]) if m else 0}")
            if not is_zero(m):
                clean[d] = m
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "blocks", _freeze(clean))

    def __setattr__(self, name, value):
        raise AttributeError("GradedMap is immutable")

    @classmethod
    def zero(cls, source, target, shift=0):
        return cls(source, target, shift)

    @classmethod
    def identity(cls, V: GradedSpace):
        return cls(V, V, 0, {d: identity(n, V.field) for d, n in V.dims.items()})

    @property
    def field(self):
        return self.source.field

    def block(self, d: int) -> Matrix:
        if d in self.blocks:
            return self.blocks[d]
        return zeros(self.target.dim(d + self.shift), self.source.dim(d), self.field)

    def rank(self, d: int) -> int:
        return rank(self.blocks[d], self.field) if d in self.blocks else 0

    def total_rank(self) -> int:
        return sum(self.rank(d) for d in self.blocks)

    def is_zero(self) -> bool:
        return not self.blocks

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """``self @ other`` is ``self`` after ``other``."""
        if other.target != self.source:
            raise ValueError("composition: target/source mismatch")
        F = self.field
        blocks = {}
        for d in other.blocks:
            e = d + other.shift
            if e in self.blocks:
                blocks[d] = matmul(self.blocks[e], other.blocks[d], F)
        return GradedMap(other.source, self.target, self.shift + other.shift, blocks)


def homology(d_in: GradedMap, d_out: GradedMap) -> GradedSpace:
    """Homology at the middle term of ``A --d_in--> B --d_out--> C``."""
    if d_in.target != d_out.source:
        raise ValueError("shape mismatch: target(d_in) != source(d_out)")
    comp = d_out @ d_in
    if not comp.is_zero():
        raise NotAComplex("not a complex: d_out o d_in != 0")
    B = d_in.target
    dims, labels = {}, {}
    for d, n in B.dims.items():
        h = n - d_out.rank(d) - d_in.rank(d - d_in.shift)
        if h:
            dims[d] = h
            labels[d] = tuple(f"h{d}_{i}" for i in range(h))
    return GradedSpace(dims, field=B.field, grading=B.grading, labels=labels)


# ---------------------------------------------------------------------------
# Directed and inverse systems


FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class DirectedSystem:
    """Stages ``V_0, ..., V_m`` with maps between neighbours.

    Forward systems have ``maps[k]: V_k -> V_{k+1}``; backward ones
    ``maps[k]: V_{k+1} -> V_k``.  For forward systems, ``tail`` (an
    endomorphism of the last stage) stands for every continuation map past
    the last stage; ``None`` means the system is simply finite.
    """

    stages: tuple[GradedSpace, ...]
    maps: tuple[GradedMap, ...]
    direction: str = FORWARD
    tail: GradedMap | None = None

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.stages:
            raise ValueError("a system needs at least one stage")
        if len(self.maps) != len(self.stages) - 1:
            raise ValueError("need exactly one map between neighbouring stages")
        for k, f in enumerate(self.maps):
            a, b = self.stages[k], self.stages[k + 1]
            src, tgt = (a, b) if self.direction == FORWARD else (b, a)
            if f.source != src or f.target != tgt or f.shift != 0:
                raise ValueError(f"map {k} incompatible with its stages")
        if self.tail is not None:
            last = self.stages[-1]
            if self.direction != FORWARD or self.tail.source != last or self.tail.target != last:
                raise ValueError("tail must be an endomorphism of the last forward stage")


@dataclass(frozen=True)
class Colimit:
    space: GradedSpace
    image_ranks: tuple[dict[int, int], ...]

    @property
    def trace(self) -> tuple[int, ...]:
        """Total image rank of each stage in the limit (the r(tau) data)."""
        return tuple(sum(r.values()) for r in self.image_ranks)


def _power(f: GradedMap, k: int) -> GradedMap:
    out = GradedMap.identity(f.source)
    for _ in range(k):
        out = f @ out
    return out


def direct_limit(sys: DirectedSystem) -> Colimit:
    """Colimit of a forward system, per degree, with per-stage image ranks."""
    if sys.direction != FORWARD:
        raise ValueError("backward system: use inverse_limit semantics in surgery.finite_type")
    last = sys.stages[-1]
    if sys.tail is None:
        to_limit = GradedMap.identity(last)
    else:
        # eventually-dead classes form the generalized kernel of the tail
        to_limit = _power(sys.tail, max(last.dims.values(), default=0))
    space_dims = {d: to_limit.rank(d) for d in last.dims}
    space = GradedSpace(space_dims, field=last.field, grading=last.grading)
    ranks = []
    composite = to_limit
    per_stage = [None] * len(sys.stages)
    per_stage[-1] = composite
    for k in range(len(sys.maps) - 1, -1, -1):
        composite = composite @ sys.maps[k]
        per_stage[k] = composite
    for f in per_stage:
        ranks.append({d: r for d in f.source.dims if (r := f.rank(d))})
    return Colimit(space, tuple(ranks))


def inverse_limit(sys: DirectedSystem) -> tuple[GradedSpace, tuple[GradedMap, ...]]:
    """Limit of a finite backward system and its projections to each stage.

    A finite inverse system has its top stage as limit; the projections
    are the composites of the connecting maps.
    """
    if sys.direction != BACKWARD:
        raise ValueError("inverse_limit needs a backward system")
    top = sys.stages[-1]
    proj = [None] * len(sys.stages)
    proj[-1] = GradedMap.identity(top)
    for k in range(len(sys.maps) - 1, -1, -1):
        proj[k] = sys.maps[k] @ proj[k + 1]
    return top, tuple(proj)
