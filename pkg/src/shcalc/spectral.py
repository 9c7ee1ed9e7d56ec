"""Cohomological spectral sequences on bounded windows.

Pages live in columns ``p <= 0``; ``d_r`` has bidegree ``(r, 1 - r)`` and
so raises the total degree ``p + q`` by one.  Differentials are always
supplied as data: the engine validates them and propagates ranks.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from types import MappingProxyType
from typing import Mapping, Sequence

from .linalg import QQ, Field, Matrix, is_zero, matmul, rank

Spot = tuple[int, int]


class BidegreeError(ValueError):
    pass


class NonzeroSquare(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`degeneration_check`.

    ``status`` is ``"degenerate"``, ``"unknown"`` or ``"counterexample"``;
    a counterexample carries the source spot and page ``(p, q, r)``.
    """

    status: str
    witness: tuple[int, int, int] | None = None
    reason: str = ""

    @property
    def degenerate(self) -> bool:
        return self.status == "degenerate"

    def as_dict(self):
        d = {"status": self.status}
        if self.witness is not None:
            d["witness"] = list(self.witness)
        if self.reason:
            d["reason"] = self.reason
        return d


@dataclass(frozen=True)
class Page:
    """Page ``E_r`` restricted to a window.

    ``entries`` maps ``(p, q)`` to a dimension.  The page is complete on
    its window: columns ``p_min..0`` and total degrees ``lo..hi``.
    """

    entries: Mapping[Spot, int]
    r: int = 1
    columns: tuple[int, int] = (0, 0)
    window: tuple[int, int] = (0, 0)
    field: Field = QQ
    labels: Mapping[Spot, tuple[str, ...]] = dc_field(default_factory=dict)
    certificate: Verdict | None = None

    def __post_init__(self):
        ents = {(int(p), int(q)): int(n) for (p, q), n in self.entries.items() if n}
        if any(n < 0 for n in ents.values()):
            raise ValueError("negative entry dimension")
        if any(p > 0 for p, _ in ents):
            raise ValueError("entries must vanish for p > 0")
        pmin, pmax = self.columns
        lo, hi = self.window
        for (p, q) in ents:
            if not (pmin <= p <= pmax and lo <= p + q <= hi):
                raise ValueError(f"entry {(p, q)} outside the declared window")
        if self.r < 1:
            raise ValueError("page index starts at 1")
        object.__setattr__(self, "entries", MappingProxyType(ents))
        labels = {s: tuple(l) for s, l in self.labels.items() if s in ents}
        object.__setattr__(self, "labels", MappingProxyType(labels))

    @classmethod
    def empty(cls, field: Field = QQ):
        return cls({}, field=field)

    def dim(self, p: int, q: int) -> int:
        return self.entries.get((p, q), 0)

    def in_window(self, p: int, q: int) -> bool:
        return self.columns[0] <= p <= self.columns[1] and self.window[0] <= p + q <= self.window[1]

    def totals(self) -> dict[int, int]:
        """Total-degree ranks, i.e. the associated graded summed over p."""
        out: dict[int, int] = {}
        for (p, q), n in self.entries.items():
            out[p + q] = out.get(p + q, 0) + n
        return dict(sorted(out.items()))

    def column(self, p: int) -> dict[int, int]:
        return {q: n for (pp, q), n in sorted(self.entries.items()) if pp == p}

    def is_zero(self) -> bool:
        return not self.entries

    def same_entries(self, other: "Page") -> bool:
        return dict(self.entries) == dict(other.entries)

    def restrict(self, lo: int, hi: int) -> dict[Spot, int]:
        return {s: n for s, n in self.entries.items() if lo <= s[0] + s[1] <= hi}


@dataclass(frozen=True)
class Differential:
    """``d_r`` as blocks ``(p, q) -> matrix`` into ``(p + r, q - r + 1)``."""

    r: int
    blocks: Mapping[Spot, Sequence[Sequence]] = dc_field(default_factory=dict)

    def target(self, p: int, q: int) -> Spot:
        return p + self.r, q - self.r + 1


@dataclass(frozen=True)
class SpectralSystem:
    initial: Page
    differentials: tuple[Differential, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "differentials", tuple(self.differentials))
        for k, d in enumerate(self.differentials):
            if d.r != self.initial.r + k:
                raise ValueError(f"differential {k} has r={d.r}, expected {self.initial.r + k}")


def _validated_blocks(pg: Page, d: Differential) -> dict[Spot, Matrix]:
    if d.r != pg.r:
        raise BidegreeError(f"d_{d.r} applied to page E_{pg.r}")
    F = pg.field
    out = {}
    for (p, q), m in d.blocks.items():
        tp, tq = d.target(p, q)
        rows, cols = pg.dim(tp, tq), pg.dim(p, q)
        m = F.matrix(m)
        if is_zero(m) and (rows == 0 or cols == 0):
            continue
        if len(m) != rows or any(len(row) != cols for row in m):
            raise BidegreeError(
                f"block at {(p, q)} must be {rows}x{cols} into {(tp, tq)} for bidegree "
                f"({d.r}, {1 - d.r})")
        if not is_zero(m):
            out[(p, q)] = m
    for (p, q), m in out.items():
        t = d.target(p, q)
        if t in out and not is_zero(matmul(out[t], m, F)):
            raise NonzeroSquare(f"d_{d.r} o d_{d.r} != 0 at {(p, q)}")
    return out


def turn_page(pg: Page, d: Differential) -> Page:
    """``E_{r+1}`` from ``E_r`` and ``d_r``: ker over im at every spot."""
    blocks = _validated_blocks(pg, d)
    F = pg.field
    ranks = {s: rank(m, F) for s, m in blocks.items()}
    incoming = {}
    for s, rk in ranks.items():
        t = d.target(*s)
        incoming[t] = incoming.get(t, 0) + rk
    entries = {}
    for s, n in pg.entries.items():
        left = n - ranks.get(s, 0) - incoming.get(s, 0)
        if left:
            entries[s] = left
    return Page(entries, r=pg.r + 1, columns=pg.columns, window=pg.window, field=F,
                labels={s: l for s, l in pg.labels.items() if entries.get(s) == pg.entries[s]})


def degeneration_check(pg: Page, from_r: int = 1) -> Verdict:
    """Certify by degree reasons that every ``d_r``, ``r >= from_r``, vanishes.

    Only spots inside the declared window are quantified over.  When a
    possible source or target of a nonzero entry lies in the column range
    but outside the total-degree window, the verdict is ``unknown``.
    """
    pmin, _ = pg.columns
    lo, hi = pg.window
    max_r = -pmin
    unknown = None
    for (p, q) in sorted(pg.entries):
        t = p + q
        for r in range(max(from_r, 1), max_r + 1):
            tp, tq = p + r, q - r + 1
            if tp <= 0:
                if t + 1 > hi:
                    unknown = unknown or (p, q, r)
                elif pg.dim(tp, tq):
                    return Verdict("counterexample", (p, q, r),
                                   f"d_{r} may map {(p, q)} to {(tp, tq)}")
            sp, sq = p - r, q + r - 1
            if sp >= pmin and t - 1 < lo:
                unknown = unknown or (p, q, r)
    if unknown:
        return Verdict("unknown", unknown, "window too small to decide")
    return Verdict("degenerate")


def run_pages(ss: SpectralSystem) -> Page:
    """Apply every listed differential; certify degeneration past the last."""
    pg = ss.initial
    for d in ss.differentials:
        pg = turn_page(pg, d)
    verdict = degeneration_check(pg, pg.r)
    if verdict.degenerate:
        pg = Page(pg.entries, r=pg.r, columns=pg.columns, window=pg.window, field=pg.field,
                  labels=pg.labels, certificate=verdict)
    return pg


@dataclass(frozen=True)
class EdgeData:
    column: dict[int, int]
    image_rank: dict[int, int]


def edge_data(ss: SpectralSystem) -> EdgeData:
    """The ``p = 0`` column at the last computed page.

    Its rank in total degree ``d`` is the rank of the image of ordinary
    cohomology ``H^{d+n}(M)`` in the abutment (edge homomorphism).
    """
    last = run_pages(ss)
    col = last.column(0)
    return EdgeData(column=col, image_rank={q: n for q, n in col.items()})


# ---------------------------------------------------------------------------
# text serialization


def _fmt_matrix(m) -> str:
    return ";".join(",".join(str(x) for x in row) for row in m) or "-"


def _parse_matrix(s: str, F: Field):
    if s == "-":
        return ()
    return F.matrix([[x for x in row.split(",")] for row in s.split(";")])


def dumps(pg: Page, differentials: Sequence[Differential] = ()) -> str:
    """Records ``p q dim`` then ``d r p q rows``, lexicographic in (r, p, q)."""
    lines = [f"field {pg.field}", f"page {pg.r}",
             f"columns {pg.columns[0]} {pg.columns[1]}",
             f"window {pg.window[0]} {pg.window[1]}"]
    for (p, q) in sorted(pg.entries):
        lines.append(f"{p} {q} {pg.entries[(p, q)]}")
    recs = []
    for d in differentials:
        for (p, q), m in d.blocks.items():
            recs.append((d.r, p, q, _fmt_matrix(pg.field.matrix(m))))
    for r, p, q, m in sorted(recs):
        lines.append(f"d {r} {p} {q} {m}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> tuple[Page, list[Differential]]:
    F, r, cols, win = QQ, 1, (0, 0), (0, 0)
    entries, dblocks = {}, {}
    for line in text.splitlines():
        tok = line.split()
        if not tok or tok[0].startswith("#"):
            continue
        head = tok[0]
        if head == "field":
            F = Field.parse(tok[1])
        elif head == "page":
            r = int(tok[1])
        elif head == "columns":
            cols = (int(tok[1]), int(tok[2]))
        elif head == "window":
            win = (int(tok[1]), int(tok[2]))
        elif head == "d":
            rr, p, q = int(tok[1]), int(tok[2]), int(tok[3])
            dblocks.setdefault(rr, {})[(p, q)] = tok[4]
        else:
            entries[(int(tok[0]), int(tok[1]))] = int(tok[2])
    pg = Page(entries, r=r, columns=cols, window=win, field=F)
    diffs = [Differential(rr, {s: _parse_matrix(m, F) for s, m in b.items()})
             for rr, b in sorted(dblocks.items())]
    return pg, diffs
