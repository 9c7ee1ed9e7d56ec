"""E_1 pages for boundaries with a free circle Reeb action.

Three page shapes are built here:

* ``e1_circle``:   column 0 is ``H^{q+n}(M)``, column ``p < 0`` is
  ``H^{p+q+n-p*mu}(dM)``;
* ``e1_equivariant``: column 0 is ``H^{q+n}(M; K)`` with ``K = k((u))/u k[[u]]``,
  column ``p < 0`` is ``H^{p+q+n-1-p*mu}(dM/S^1)``;
* ``e1_u_adic``:   ``E_1^{pq} = SH^{q-p}`` for ``p <= 0``.

``builtin_case`` packages the four worked models together with their
known differentials.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .algebra import GradedSpace, TailRule, point, sphere
from .linalg import QQ, Field
from .spectral import Differential, Page, SpectralSystem

#: ranks of H^*(unit tangent bundle of S^n), keyed by (n, euler class vanishes
#: in the field).  Generated by scripts/gysin_oracle.py.
UNIT_TANGENT_TABLE = {
    (1, False): (0, 0, 1, 1),
    (1, True): (0, 0, 1, 1),
    (2, False): (0, 3),
    (2, True): (0, 1, 2, 3),
    (3, False): (0, 2, 3, 5),
    (3, True): (0, 2, 3, 5),
    (4, False): (0, 7),
    (4, True): (0, 3, 4, 7),
    (5, False): (0, 4, 5, 9),
    (5, True): (0, 4, 5, 9),
    (6, False): (0, 11),
    (6, True): (0, 5, 6, 11),
    (7, False): (0, 6, 7, 13),
    (7, True): (0, 6, 7, 13),
    (8, False): (0, 15),
    (8, True): (0, 7, 8, 15),
    (9, False): (0, 8, 9, 17),
    (9, True): (0, 8, 9, 17),
    (10, False): (0, 19),
    (10, True): (0, 9, 10, 19),
    (11, False): (0, 10, 11, 21),
    (11, True): (0, 10, 11, 21),
    (12, False): (0, 23),
    (12, True): (0, 11, 12, 23),
}

BUILTIN_NAMES = ("ball", "surface", "tstar_sphere", "s2_equivariant")


def unit_tangent_cohomology(n: int, field: Field = QQ) -> GradedSpace:
    """H^* of the unit tangent bundle of S^n (the boundary of D*S^n)."""
    chi = 1 + (-1) ** n
    vanishes = chi % field.p == 0 if field.p else chi == 0
    key = (n, vanishes)
    if key in UNIT_TANGENT_TABLE:
        degs = UNIT_TANGENT_TABLE[key]
    elif vanishes:
        degs = (0, n - 1, n, 2 * n - 1)
    else:
        degs = (0, 2 * n - 1)
    dims: dict[int, int] = {}
    for d in degs:
        dims[d] = dims.get(d, 0) + 1
    return GradedSpace(dims, field=field)


@dataclass(frozen=True)
class BoundaryModel:
    """Input data of the circle-action spectral sequence.

    ``mu`` is supplied by the caller; it is never derived from geometry.
    """

    n: int
    mu: int
    hM: GradedSpace
    hBoundary: GradedSpace
    hQuotient: GradedSpace | None = None

    def __post_init__(self):
        if self.mu % 2:
            raise ValueError(f"mu must be even, got {self.mu}")
        if self.n < 1:
            raise ValueError("n must be positive")
        for name, V, top in (("hM", self.hM, 2 * self.n), ("hBoundary", self.hBoundary, 2 * self.n - 1)):
            if not V.finite or any(d < 0 or d > top for d in V.dims):
                raise ValueError(f"{name} must be supported in [0, {top}]")

    @property
    def field(self) -> Field:
        return self.hM.field


def _auto_columns(degrees, shift: int, mu: int, window) -> int:
    """Lowest column whose totals ``e + shift + p*mu`` can meet ``window``."""
    lo, hi = window
    if not degrees:
        return 0
    if mu > 0:
        return min(0, math.ceil((lo - max(degrees) - shift) / mu))
    if mu < 0:
        return min(0, math.ceil((hi - min(degrees) - shift) / mu))
    raise ValueError("mu = 0 puts every column in the same degrees; give a column cutoff")


def e1_circle(bm: BoundaryModel, columns: int | None = None,
              window: tuple[int, int] = (-20, 0)) -> Page:
    """E_1 of the circle-action spectral sequence on a window of total degrees."""
    n, mu = bm.n, bm.mu
    lo, hi = window
    if lo > hi:
        raise ValueError("empty degree window")
    P = columns if columns is not None else _auto_columns(list(bm.hBoundary.dims), -n, mu, window)
    if P > 0:
        raise ValueError("column cutoff must be <= 0")
    entries, labels = {}, {}
    for j, m in bm.hM.dims.items():
        q = j - n
        if lo <= q <= hi:
            entries[(0, q)] = m
            labels[(0, q)] = tuple(f"M{j}.{i}" for i in range(m))
    for p in range(P, 0):
        for e, m in bm.hBoundary.dims.items():
            q = e - n - p + p * mu
            if lo <= p + q <= hi:
                entries[(p, q)] = entries.get((p, q), 0) + m
                labels[(p, q)] = tuple(f"B{e}@{-p}.{i}" for i in range(entries[(p, q)]))
    return Page(entries, r=1, columns=(P, 0), window=window, field=bm.field, labels=labels)


def e1_equivariant(bm: BoundaryModel, columns: int | None = None,
                   window: tuple[int, int] = (-20, 0)) -> Page:
    """E_1 of the equivariant spectral sequence; K is truncated at the window."""
    if bm.hQuotient is None:
        raise ValueError("equivariant page needs H^*(dM/S^1)")
    if bm.field.p:
        raise ValueError("equivariant page needs a field containing Q")
    n, mu = bm.n, bm.mu
    lo, hi = window
    P = columns if columns is not None else _auto_columns(list(bm.hQuotient.dims), 1 - n, mu, window)
    entries = {}
    for q in range(lo, hi + 1):
        # u^{-i} has degree -2i, so H^j(M) contributes in degrees j, j-2, j-4, ...
        m = sum(bm.hM.dim(j) for j in range(q + n, max(bm.hM.dims, default=0) + 1, 2))
        if m:
            entries[(0, q)] = m
    for p in range(P, 0):
        for e, m in bm.hQuotient.dims.items():
            q = e - n + 1 - p + p * mu
            if lo <= p + q <= hi:
                entries[(p, q)] = entries.get((p, q), 0) + m
    return Page(entries, r=1, columns=(P, 0), window=window, field=bm.field)


def e1_u_adic(sh: GradedSpace, columns: int = -4, window: tuple[int, int] = (-12, 0)) -> Page:
    """E_1 of the u-adic filtration: ``SH^{q-p}`` at ``(p, q)``, ``p <= 0``.

    Pure bookkeeping; the first differential (the BV operator) is user data.
    """
    if sh.grading != "Z":
        raise ValueError("u-adic page needs a Z-graded input")
    lo, hi = window
    entries = {}
    for p in range(columns, 1):
        for t in range(lo, hi + 1):
            q = t - p
            m = sh.dim(q - p)
            if m:
                entries[(p, q)] = m
    return Page(entries, r=1, columns=(columns, 0), window=window, field=sh.field)


def e1_totals(bm: BoundaryModel) -> GradedSpace:
    """Total-degree ranks of the whole circle-action E_1 page, as a space with tails.

    When the spectral sequence degenerates this is the answer itself:
    ``H^{*+n}(M)`` plus, for each class of the boundary in degree ``e``, a
    progression ``e - n + p*mu`` over ``p <= -1``.
    """
    if bm.mu == 0:
        raise ValueError("mu = 0 stacks every column in the same degrees")
    n, mu = bm.n, bm.mu
    tails = [TailRule(e - n - mu, -mu, m) for e, m in bm.hBoundary.dims.items()]
    return GradedSpace({j - n: m for j, m in bm.hM.dims.items()}, field=bm.field, tails=tails)


# ---------------------------------------------------------------------------
# builtin worked cases


def ball_model(n: int, field: Field = QQ) -> BoundaryModel:
    return BoundaryModel(n, 2 * n, point(0, field), sphere(2 * n - 1, field))


def surface_model(g: int, field: Field = QQ) -> BoundaryModel:
    if g < 1:
        raise ValueError("surface model needs genus g > 0")
    return BoundaryModel(1, 2 - 4 * g, GradedSpace({0: 1, 1: 2 * g}, field=field), sphere(1, field))


def tstar_sphere_model(n: int, field: Field = QQ) -> BoundaryModel:
    return BoundaryModel(n, 2 * n - 2, sphere(n, field), unit_tangent_cohomology(n, field))


def s2_model(field: Field = QQ) -> BoundaryModel:
    return BoundaryModel(2, 2, sphere(2, field), unit_tangent_cohomology(2, field), sphere(2, field))


def parse_case(text: str) -> tuple[str, int | None]:
    """``"ball(3)"`` -> ``("ball", 3)``; ``"s2_equivariant"`` -> ``(..., None)``."""
    m = re.fullmatch(r"\s*([a-z0-9_]+)\s*(?:\(\s*(-?\d+)\s*\))?\s*", text)
    if not m or m.group(1) not in BUILTIN_NAMES:
        raise ValueError(f"unknown builtin case {text!r}; choose from {', '.join(BUILTIN_NAMES)}")
    name, arg = m.group(1), m.group(2)
    if name == "s2_equivariant":
        if arg is not None:
            raise ValueError("s2_equivariant takes no parameter")
        return name, None
    if arg is None:
        raise ValueError(f"{name} needs a parameter, e.g. {name}(3)")
    return name, int(arg)


def default_window(name: str, param: int | None) -> tuple[int, int]:
    if name == "ball":
        return (-10 * param - 2, 0)
    if name == "surface":
        return (-1, 3 * (4 * param - 2))
    if name == "tstar_sphere":
        return (-70, 1)
    return (-13, 0)


def default_columns(name: str) -> int | None:
    """Column cutoff used when none is given (``None``: every column meeting the window).

    For cotangent bundles of spheres the columns are cut at ``p = -6``.
    Columns ``p >= P`` span a subcomplex of the filtered complex whose
    spectral sequence is exactly the truncated page, so a certificate on
    it is honest; the lowest columns of a full window, by contrast, always
    have possible sources just below the total-degree cutoff.
    """
    return -6 if name == "tstar_sphere" else None


def _ball_system(n: int, window, field: Field) -> SpectralSystem:
    pg = e1_circle(ball_model(n, field), window=window)
    # d_1 pairs the top class of column p-1 with the bottom class of column p;
    # spots whose partner lies outside the window are trimmed so E_2 is exact.
    top_q = {p: q for (p, q) in pg.entries if p < 0 and p + q == n - 1 + 2 * n * p}
    pairs = {}
    for p, q in top_q.items():
        if pg.dim(p + 1, q):
            pairs[(p, q)] = [[1]]
    keep = set(pairs) | {(p + 1, q) for (p, q) in pairs}
    entries = {s: m for s, m in pg.entries.items() if s in keep}
    pg = Page(entries, r=1, columns=pg.columns, window=pg.window, field=field,
              labels={s: l for s, l in pg.labels.items() if s in keep})
    return SpectralSystem(pg, (Differential(1, pairs),))


def _s2_system(window, columns: int | None, field: Field) -> SpectralSystem:
    lo, hi = window
    R = columns if columns is not None else -((-lo - 1) // 2)
    R = -abs(R)
    pg = e1_equivariant(s2_model(field), columns=R, window=window)
    diffs = []
    for r in range(1, -R + 1):
        src, tgt = (-r, -r - 1), (0, -2 * r)
        blocks = {}
        if pg.dim(*src) and pg.dim(*tgt):
            blocks[src] = [[1]] + [[0]] * (pg.dim(*tgt) - 1)
        diffs.append(Differential(r, blocks))
    return SpectralSystem(pg, tuple(diffs))


def builtin_case(name: str, param: int | None = None, window: tuple[int, int] | None = None,
                 columns: int | None = None, field: Field = QQ) -> SpectralSystem:
    """E_1 plus the known differentials for the four worked models.

    ``ball(n)`` carries the acyclic ``d_1``; ``surface(g)`` and
    ``tstar_sphere(n)`` carry none; ``s2_equivariant`` carries the rank-one
    ``d_r: E^{-r,-r-1} -> E^{0,-2r}``.
    """
    if name not in BUILTIN_NAMES:
        raise ValueError(f"unknown builtin case {name!r}")
    if name != "s2_equivariant" and (param is None or param < 1):
        raise ValueError(f"{name} needs a parameter >= 1")
    window = window or default_window(name, param)
    if name == "ball":
        return _ball_system(param, window, field)
    if name == "surface":
        return SpectralSystem(e1_circle(surface_model(param, field), columns=columns, window=window))
    if name == "tstar_sphere":
        columns = default_columns(name) if columns is None else columns
        return SpectralSystem(e1_circle(tstar_sphere_model(param, field), columns=columns, window=window))
    return _s2_system(window, columns, field)


def u_torsion_free_rank(column: dict[int, int], window: tuple[int, int]) -> int | None:
    """Number of K-towers in a p = 0 column, read off the low end of the window.

    Each parity class must be constant on the lower half of the window;
    otherwise the window cannot decide and ``None`` is returned.
    """
    lo, hi = window
    mid = (lo + hi) // 2
    total = 0
    for parity in (0, 1):
        vals = {column.get(q, 0) for q in range(lo, mid + 1) if q % 2 == parity}
        if len(vals) > 1:
            return None
        total += vals.pop() if vals else 0
    return total
