"""Truncated Novikov series and the Maurer-Cartan problem for a torus in a surface-like model.

Series have nonnegative rational exponents and rational coefficients.
The disc data of a Lagrangian torus is a list of boundary classes
``alpha`` in ``Z^2`` with counts ``k_alpha`` and areas ``A_alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import sympy

Exp = Fraction


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class NotPositive(ValueError):
    """A series that should lie in the maximal ideal has a constant or negative term."""


class NovikovSeries:
    """``sum c_e t^e`` for ``0 <= e < trunc``; ``trunc=None`` means exact (finite) series."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms: Mapping | Iterable = (), trunc=None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        trunc = None if trunc is None else _q(trunc)
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            e, c = _q(e), _q(c)
            if e < 0:
                raise ValueError("negative exponent")
            if trunc is not None and e >= trunc:
                continue
            acc[e] = acc.get(e, 0) + c
        self.terms = dict(sorted((e, c) for e, c in acc.items() if c))
        self.trunc = trunc

    @classmethod
    def monomial(cls, e, c=1, trunc=None) -> "NovikovSeries":
        return cls({e: c}, trunc)

    @classmethod
    def zero(cls, trunc=None) -> "NovikovSeries":
        return cls({}, trunc)

    @classmethod
    def one(cls, trunc=None) -> "NovikovSeries":
        return cls({0: 1}, trunc)

    def _trunc_with(self, other) -> Fraction | None:
        ts = [t for t in (self.trunc, getattr(other, "trunc", None)) if t is not None]
        return min(ts) if ts else None

    def valuation(self) -> Fraction | None:
        """Smallest exponent, or ``None`` for the zero series."""
        return next(iter(self.terms), None)

    def is_zero(self) -> bool:
        return not self.terms

    def is_positive(self) -> bool:
        """Element of the maximal ideal: every exponent is strictly positive."""
        return all(e > 0 for e in self.terms)

    def is_unit(self) -> bool:
        return self.terms.get(Fraction(0), 0) != 0

    def coeff(self, e) -> Fraction:
        return self.terms.get(_q(e), Fraction(0))

    def truncate(self, N) -> "NovikovSeries":
        N = _q(N)
        t = N if self.trunc is None else min(N, self.trunc)
        return NovikovSeries(self.terms, t)

    def __add__(self, other):
        if not isinstance(other, NovikovSeries):
            other = NovikovSeries.monomial(0, other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) + c
        return NovikovSeries(acc, self._trunc_with(other))

    __radd__ = __add__

    def __neg__(self):
        return NovikovSeries({e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NovikovSeries):
            c = _q(other)
            return NovikovSeries({e: c * x for e, x in self.terms.items()}, self.trunc)
        N = self._trunc_with(other)
        acc: dict[Fraction, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if N is not None and e >= N:
                    break
                acc[e] = acc.get(e, 0) + c1 * c2
        return NovikovSeries(acc, N)

    __rmul__ = __mul__

    def exp(self, N=None) -> "NovikovSeries":
        """Formal exponential; requires a series in the maximal ideal."""
        if not self.is_positive():
            raise NotPositive("exp needs strictly positive exponents")
        N = self.trunc if N is None else _q(N) if self.trunc is None else min(_q(N), self.trunc)
        if N is None:
            raise ValueError("exp of an exact series needs a truncation order")
        out = NovikovSeries.one(N)
        x = self.truncate(N)
        if x.is_zero():
            return out
        term = NovikovSeries.one(N)
        for k in range(1, math.ceil(N / x.valuation()) + 1):
            term = term * x * Fraction(1, k)
            if term.is_zero():
                break
            out = out + term
        return out

    def shift(self, A, N=None) -> "NovikovSeries":
        """Multiply by ``t^A``; the truncation order moves up by ``A`` unless ``N`` is given."""
        A = _q(A)
        if N is None:
            N = None if self.trunc is None else self.trunc + A
        return NovikovSeries({e + A: c for e, c in self.terms.items()}, N)

    def rescale(self, lam) -> "NovikovSeries":
        """Substitute ``t -> t^lam``."""
        lam = _q(lam)
        if lam <= 0:
            raise ValueError("rescaling factor must be positive")
        return NovikovSeries({e * lam: c for e, c in self.terms.items()},
                             None if self.trunc is None else self.trunc * lam)

    def __eq__(self, other):
        if isinstance(other, NovikovSeries):
            return self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        return f"NovikovSeries({self}, trunc={self.trunc})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}" if e.denominator == 1 else f"t^({e})")
            if e == 0:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}" if c.denominator == 1 else f"-({-c})*{mono}" if c < 0 else f"({c})*{mono}"
            parts.append(s)
        out = " + ".join(parts).replace("+ -", "- ")
        return out

    def as_dict(self):
        return {"terms": [[str(e), str(c)] for e, c in self.terms.items()],
                "trunc": None if self.trunc is None else str(self.trunc)}


# ---------------------------------------------------------------------------
# disc data


@dataclass(frozen=True)
class Disc:
    alpha: tuple[int, int]
    k: int
    area: Fraction


@dataclass(frozen=True)
class DiscData:
    discs: tuple[Disc, ...] = ()

    def __post_init__(self):
        ds = []
        for d in self.discs:
            if not isinstance(d, Disc):
                a, k, A = d
                d = Disc((int(a[0]), int(a[1])), int(k), _q(A))
            if d.alpha == (0, 0):
                raise ValueError("boundary class must be nonzero")
            if d.area <= 0:
                raise ValueError("areas must be positive")
            ds.append(d)
        object.__setattr__(self, "discs", tuple(ds))

    @classmethod
    def of(cls, rows) -> "DiscData":
        return cls(tuple(rows))

    def dumps(self) -> str:
        return "".join(f"{d.alpha[0]} {d.alpha[1]} {d.k} {d.area}\n" for d in self.discs)

    @classmethod
    def loads(cls, text: str) -> "DiscData":
        rows = []
        for n, line in enumerate(text.splitlines(), 1):
            tok = line.split("#", 1)[0].split()
            if not tok:
                continue
            if len(tok) != 4:
                raise ValueError(f"line {n}: expected 'alpha1 alpha2 k area'")
            rows.append(((int(tok[0]), int(tok[1])), int(tok[2]), Fraction(tok[3])))
        return cls(tuple(rows))

    def rescale(self, lam) -> "DiscData":
        return DiscData(tuple(Disc(d.alpha, d.k, d.area * _q(lam)) for d in self.discs))

    def lattice_step(self) -> Fraction | None:
        """Largest ``h`` with every area in ``h Z``."""
        if not self.discs:
            return None
        den = reduce(lambda x, y: x * y // math.gcd(x, y), (d.area.denominator for d in self.discs))
        g = reduce(math.gcd, (int(d.area * den) for d in self.discs))
        return Fraction(g, den)


@dataclass(frozen=True)
class Deformation:
    """A class in ``H^1(T^2)`` with coefficients in the maximal ideal."""

    a1: NovikovSeries
    a2: NovikovSeries

    def __post_init__(self):
        for x in (self.a1, self.a2):
            if not isinstance(x, NovikovSeries):
                raise TypeError("components must be NovikovSeries")
            if not x.is_positive():
                raise NotPositive("deformation must have strictly positive exponents")

    @classmethod
    def zero(cls) -> "Deformation":
        return cls(NovikovSeries(), NovikovSeries())

    def pair(self, alpha) -> NovikovSeries:
        return self.a1 * alpha[0] + self.a2 * alpha[1]

    def rescale(self, lam) -> "Deformation":
        return Deformation(self.a1.rescale(lam), self.a2.rescale(lam))

    def as_dict(self):
        return {"a1": str(self.a1), "a2": str(self.a2)}


def holonomy_weight(alpha, A, a: Deformation, N) -> NovikovSeries:
    """``t^A exp(alpha . a)`` mod ``t^N``."""
    A, N = _q(A), _q(N)
    if A <= 0:
        raise ValueError("area must be positive")
    if A >= N:
        return NovikovSeries.zero(N)
    return a.pair(alpha).exp(N - A).shift(A)


def m0(d: DiscData, a: Deformation, N) -> NovikovSeries:
    out = NovikovSeries.zero(N)
    for disc in d.discs:
        out = out + holonomy_weight(disc.alpha, disc.area, a, N) * disc.k
    return out


def m1(d: DiscData, a: Deformation, N) -> tuple[NovikovSeries, NovikovSeries]:
    x, y = NovikovSeries.zero(N), NovikovSeries.zero(N)
    for disc in d.discs:
        w = holonomy_weight(disc.alpha, disc.area, a, N) * disc.k
        x = x + w * disc.alpha[0]
        y = y + w * disc.alpha[1]
    return x, y


# ---------------------------------------------------------------------------
# order-by-order solving


@dataclass(frozen=True)
class MCVerdict:
    """``status`` is ``"solution"``, ``"no-solution"`` or ``"undetermined"``.

    ``order`` is the exponent up to which the equations were examined;
    for a failure it is the exponent where inconsistency appeared.
    """

    status: str
    order: Fraction
    a: Deformation | None = None
    c: NovikovSeries | None = None
    reason: str = ""

    def as_dict(self):
        out = {"status": self.status, "order": str(self.order)}
        if self.a is not None:
            out["a"] = self.a.as_dict()
            out["c"] = str(self.c)
        if self.reason:
            out["reason"] = self.reason
        return out


def _lattice_exp(s: list, J: int) -> list:
    """exp of a series in ``t^h``, given as coefficients ``s[0..J]`` with ``s[0] = 0``."""
    out = [sympy.Integer(0)] * (J + 1)
    out[0] = sympy.Integer(1)
    term = list(out)
    for k in range(1, J + 1):
        new = [sympy.Integer(0)] * (J + 1)
        for i, ti in enumerate(term):
            if ti == 0:
                continue
            for j in range(1, J + 1 - i):
                if s[j] != 0:
                    new[i + j] += ti * s[j]
        term = [sympy.expand(x / k) for x in new]
        if all(x == 0 for x in term):
            break
        out = [o + x for o, x in zip(out, term)]
    return out


def solve_mc(d: DiscData, N, max_params: int = 8) -> MCVerdict:
    """Find ``a`` with ``m1(d, a) = 0 mod t^N``, order by order.

    Coefficients of ``a`` live on ``h Z_{>0}`` with ``h`` the gcd of the
    areas.  At exponent ``A_min + j h`` the equation reads
    ``M a_j = -R_j(a_1, ..., a_{j-1})`` with ``M = sum k alpha (x) alpha``
    over the discs of least area.  Kernel directions of a singular ``M``
    become free parameters (at most ``max_params``; later ones are set to
    zero) and cokernel components become polynomial constraints on them.
    """
    N = _q(N)
    if N <= 0:
        raise ValueError("truncation order must be positive")
    if not d.discs or min(x.area for x in d.discs) >= N:
        a = Deformation.zero()
        return MCVerdict("solution", N, a, m0(d, a, N))
    h = d.lattice_step()
    Amin = min(x.area for x in d.discs)
    J = math.ceil((N - Amin) / h) - 1  # last relevant order
    offs = [int((x.area - Amin) / h) for x in d.discs]
    M = sympy.zeros(2, 2)
    for x, o in zip(d.discs, offs):
        if o == 0:
            a0, a1 = x.alpha
            M += x.k * sympy.Matrix([[a0 * a0, a0 * a1], [a1 * a0, a1 * a1]])
    rank = M.rank()
    kernel = M.nullspace()
    coker = M.T.nullspace()

    A1 = [sympy.Integer(0)] * (J + 1)
    A2 = [sympy.Integer(0)] * (J + 1)
    params: list[sympy.Symbol] = []
    constraints: list = []
    truncated = False
    ux, uy = sympy.symbols("_ux _uy")

    for j in range(J + 1):
        exponent = Amin + j * h
        if j >= 1:
            A1[j], A2[j] = ux, uy
        V = sympy.Matrix([0, 0])
        for x, o in zip(d.discs, offs):
            if o > j or x.k == 0:
                continue
            s = [x.alpha[0] * p + x.alpha[1] * q for p, q in zip(A1[:j - o + 1], A2[:j - o + 1])]
            e = _lattice_exp(s, j - o)[j - o]
            V += x.k * e * sympy.Matrix(x.alpha)
        V = V.applyfunc(sympy.expand)
        R = V.subs({ux: 0, uy: 0}).applyfunc(sympy.expand)
        if j >= 1:
            if rank == 2:
                sol = -(M.inv() * R)
                A1[j], A2[j] = sympy.expand(sol[0]), sympy.expand(sol[1])
            else:
                if rank == 1:
                    col = next(i for i in range(2) if any(M[r, i] != 0 for r in range(2)))
                    row = next(r for r in range(2) if M[r, col] != 0)
                    part = [sympy.Integer(0), sympy.Integer(0)]
                    part[col] = sympy.expand(-R[row] / M[row, col])
                else:
                    part = [sympy.Integer(0), sympy.Integer(0)]
                for kv in kernel:
                    if len(params) < max_params:
                        s = sympy.Symbol(f"s{len(params) + 1}")
                        params.append(s)
                        part = [part[0] + s * kv[0], part[1] + s * kv[1]]
                    else:
                        truncated = True
                A1[j], A2[j] = sympy.expand(part[0]), sympy.expand(part[1])
        new = [sympy.expand((cv.T * R)[0]) for cv in coker] if j >= 1 else list(R)
        for c in new:
            if c == 0:
                continue
            if c.is_number:
                if truncated:
                    return MCVerdict("undetermined", exponent,
                                     reason="inconsistent after the parameter budget was exhausted")
                return MCVerdict("no-solution", exponent,
                                 reason=f"m1 has a nonzero coefficient at t^{exponent} for every choice")
            constraints.append(c)

    candidates = [{}]
    if constraints:
        gb = sympy.groebner(constraints, *params, order="lex")
        if list(gb.exprs) == [1]:
            if truncated:
                return MCVerdict("undetermined", N, reason="constraints inconsistent within the search budget")
            return MCVerdict("no-solution", N, reason="polynomial constraints have no common zero")
        try:
            candidates = sympy.solve(list(gb.exprs), params, dict=True)
        except NotImplementedError:
            candidates = []
    for cand in candidates:
        vals = {}
        for p in params:
            v = sympy.sympify(cand.get(p, 0)).subs({q: 0 for q in params if q not in cand})
            vals[p] = v
        if not all(v.is_Rational for v in vals.values()):
            continue
        a = _deformation_from(A1, A2, vals, h, N)
        x, y = m1(d, a, N)
        if x.is_zero() and y.is_zero():
            return MCVerdict("solution", N, a, m0(d, a, N))
    return MCVerdict("undetermined", N,
                     reason="constraints have no rational solution found by the search")


def _deformation_from(A1, A2, vals, h, N) -> Deformation:
    def series(coeffs):
        terms = {}
        for j, c in enumerate(coeffs):
            if j == 0:
                continue
            v = sympy.Rational(sympy.sympify(c).subs(vals))
            if v != 0:
                terms[j * h] = Fraction(int(v.p), int(v.q))
        return NovikovSeries(terms, N)
    return Deformation(series(A1), series(A2))


@dataclass(frozen=True)
class EssentialVerdict:
    """``status`` is ``"essential"``, ``"not-essential"`` or ``"undetermined"``, valid mod ``t^N``."""

    status: str
    trunc: Fraction
    mc: MCVerdict

    def as_dict(self):
        return {"status": self.status, "trunc": str(self.trunc), "mc": self.mc.as_dict()}


def essential_verdict(d: DiscData, N, max_params: int = 8) -> EssentialVerdict:
    v = solve_mc(d, N, max_params)
    status = {"solution": "essential", "no-solution": "not-essential"}.get(v.status, "undetermined")
    return EssentialVerdict(status, _q(N), v)

