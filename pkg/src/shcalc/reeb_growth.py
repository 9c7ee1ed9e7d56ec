"""Radial Hamiltonians, Reeb orbit bookkeeping and growth rates.

Exact rational arithmetic throughout, except for the log-log regression
behind :func:`growth_exponent`, which is an estimator by nature.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import DirectedSystem, GradedMap, GradedSpace, direct_limit
from .linalg import QQ

INF = math.inf


class DegenerateSlope(ValueError):
    pass


class InsufficientSamples(ValueError):
    pass


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# radial profiles and orbits


@dataclass(frozen=True)
class RadialProfile:
    """``h`` as a function of ``rho = e^r``, from exact samples ``(rho, h, h')``.

    Between samples ``h'`` is linear, so ``h`` is piecewise quadratic and
    the samples must be consistent with that.  Past the last sample ``h``
    is either linear of slope ``slope_at_infinity`` (which must equal the
    last sampled slope) or the last segment is continued (``None``, an
    unbounded slope).
    """

    samples: tuple[tuple[Fraction, Fraction, Fraction], ...]
    slope_at_infinity: Fraction | None = None

    def __post_init__(self):
        s = tuple((_q(a), _q(b), _q(c)) for a, b, c in self.samples)
        if len(s) < 2:
            raise ValueError("need at least two samples")
        for (r0, h0, d0), (r1, h1, d1) in zip(s, s[1:]):
            if not 0 <= r0 < r1:
                raise ValueError("sample radii must be increasing and nonnegative")
            if d1 < d0 or d0 < 0:
                raise ValueError("h' must be nonnegative and nondecreasing")
            if h1 != h0 + (r1 - r0) * (d0 + d1) / 2:
                raise ValueError(f"h samples inconsistent with linear h' on [{r0}, {r1}]")
        object.__setattr__(self, "samples", s)
        if self.slope_at_infinity is not None:
            object.__setattr__(self, "slope_at_infinity", _q(self.slope_at_infinity))
            if self.slope_at_infinity != s[-1][2]:
                raise ValueError("slope at infinity must equal the last sampled slope")

    @classmethod
    def quadratic(cls, a=1, rho_max=100) -> "RadialProfile":
        """``h(rho) = a rho^2`` sampled on ``[0, rho_max]`` and extended."""
        a, rho_max = _q(a), _q(rho_max)
        return cls(((0, 0, 0), (rho_max, a * rho_max ** 2, 2 * a * rho_max)))

    @property
    def sup_slope(self):
        if self.slope_at_infinity is not None:
            return self.slope_at_infinity
        (r0, _, d0), (r1, _, d1) = self.samples[-2:]
        return INF if d1 > d0 else d1

    def h(self, rho) -> Fraction:
        rho = _q(rho)
        segs = self.samples
        if rho > segs[-1][0]:
            r1, h1, d1 = segs[-1]
            if self.slope_at_infinity is not None:
                return h1 + (rho - r1) * d1
            r0, _, d0 = segs[-2]
            k = (d1 - d0) / (r1 - r0)
            return h1 + d1 * (rho - r1) + k * (rho - r1) ** 2 / 2
        i = max(0, bisect.bisect_right([s[0] for s in segs], rho) - 1)
        i = min(i, len(segs) - 2)
        (r0, h0, d0), (r1, _, d1) = segs[i], segs[i + 1]
        k = (d1 - d0) / (r1 - r0)
        return h0 + d0 * (rho - r0) + k * (rho - r0) ** 2 / 2

    def dh(self, rho) -> Fraction:
        rho = _q(rho)
        segs = self.samples
        if rho >= segs[-1][0]:
            r1, _, d1 = segs[-1]
            if self.slope_at_infinity is not None:
                return d1
            r0, _, d0 = segs[-2]
            return d1 + (d1 - d0) / (r1 - r0) * (rho - r1)
        i = max(0, bisect.bisect_right([s[0] for s in segs], rho) - 1)
        (r0, _, d0), (r1, _, d1) = segs[i], segs[i + 1]
        return d0 + (d1 - d0) / (r1 - r0) * (rho - r0)

    def solve_slope(self, T) -> Fraction:
        """The unique ``rho`` with ``h'(rho) = T``."""
        T = _q(T)
        segs = list(self.samples)
        if self.slope_at_infinity is None:
            (r0, _, d0), (r1, _, d1) = segs[-2:]
            if d1 > d0 and T >= d1:
                return r1 + (T - d1) * (r1 - r0) / (d1 - d0)
        for (r0, _, d0), (r1, _, d1) in zip(segs, segs[1:]):
            if d0 <= T <= d1:
                if d0 == d1:
                    raise DegenerateSlope(f"h' is constant {T} on [{r0}, {r1}]")
                return r0 + (T - d0) * (r1 - r0) / (d1 - d0)
        raise DegenerateSlope(f"slope {T} is not attained")


@dataclass(frozen=True)
class ReebSpectrum:
    """Periods of closed Reeb orbits: a circle action or an explicit list."""

    primitive_period: Fraction | None = None
    periods: tuple[tuple[Fraction, int], ...] = ()

    @classmethod
    def circle(cls, T0=1) -> "ReebSpectrum":
        if _q(T0) <= 0:
            raise ValueError("period must be positive")
        return cls(primitive_period=_q(T0))

    @classmethod
    def explicit(cls, periods: Iterable[tuple]) -> "ReebSpectrum":
        ps = tuple(sorted((_q(T), int(m)) for T, m in periods))
        if any(T <= 0 or m <= 0 for T, m in ps):
            raise ValueError("periods and multiplicities must be positive")
        return cls(periods=ps)

    def upto(self, tau_max) -> list[tuple[Fraction, int]]:
        tau_max = _q(tau_max)
        if self.primitive_period is not None:
            T0 = self.primitive_period
            return [(m * T0, 1) for m in range(1, int(tau_max / T0) + 1)]
        return [(T, m) for T, m in self.periods if T <= tau_max]


@dataclass(frozen=True)
class Orbit:
    period: Fraction
    rho: Fraction
    action: Fraction
    multiplicity: int = 1

    @property
    def level(self) -> float:
        """The cone coordinate ``r = log rho``."""
        return math.log(self.rho) if self.rho > 0 else -INF


def orbit_spectrum(profile: RadialProfile, spectrum: ReebSpectrum, tau_max) -> list[Orbit]:
    """1-periodic orbits of ``h(e^r)`` from Reeb orbits of period ``<= tau_max``.

    The action is ``h(rho) - rho h'(rho)``; periods the profile never
    reaches are dropped.
    """
    out = []
    sup = profile.sup_slope
    for T, mult in spectrum.upto(tau_max):
        if T >= sup:
            continue
        rho = profile.solve_slope(T)
        out.append(Orbit(T, rho, profile.h(rho) - rho * T, mult))
    return out


# ---------------------------------------------------------------------------
# the ball


def ball_cf_degrees(n: int, k: int, count: int) -> list[int]:
    """Degrees of the Floer generators for the ball when ``h'(0)`` lies in ``(2 pi k, 2 pi (k+1))``."""
    out = []
    j = k
    while len(out) < count:
        out.append(-n - 2 * n * j)
        if len(out) < count:
            out.append(-n - 2 * n * j - 1)
        j += 1
    return out


def ball_truncated_tower(n: int, k_max: int) -> DirectedSystem:
    """``HF(H^{tau_k})`` for ``k = 0..k_max``: one class in degree ``-n - 2nk``.

    Continuation maps vanish (the only solution has negative virtual
    dimension), and so does every map past the last stage.
    """
    stages = [GradedSpace({-n - 2 * n * k: 1}, labels={-n - 2 * n * k: [f"x0@{k}"]})
              for k in range(k_max + 1)]
    maps = [GradedMap.zero(a, b) for a, b in zip(stages, stages[1:])]
    return DirectedSystem(tuple(stages), tuple(maps), tail=GradedMap.zero(stages[-1], stages[-1]))


# ---------------------------------------------------------------------------
# count functions


@dataclass(frozen=True)
class CountFunction:
    """Monotone step function ``tau -> r(tau)`` known at sample points.

    ``fn`` (optional) evaluates the function anywhere; otherwise the value
    at ``tau`` is the last sample at or below ``tau`` (0 before the first).
    """

    samples: tuple[tuple[Fraction, int], ...]
    fn: Callable[[Fraction], int] | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        s = tuple((_q(t), int(r)) for t, r in self.samples)
        for (t0, r0), (t1, r1) in zip(s, s[1:]):
            if not t1 > t0:
                raise ValueError("tau samples must be strictly increasing")
            if r1 < r0:
                raise ValueError(f"count decreases between tau={t0} and tau={t1}")
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_callable(cls, fn, taus) -> "CountFunction":
        taus = [_q(t) for t in taus]
        return cls(tuple((t, fn(t)) for t in taus), fn)

    @property
    def taus(self):
        return [t for t, _ in self.samples]

    @property
    def counts(self):
        return [r for _, r in self.samples]

    def __call__(self, tau) -> int:
        tau = _q(tau)
        if self.fn is not None:
            return self.fn(tau)
        i = bisect.bisect_right(self.taus, tau)
        return self.samples[i - 1][1] if i else 0

    def dumps(self) -> str:
        return "".join(f"{t} {r}\n" for t, r in self.samples)

    @classmethod
    def loads(cls, text: str) -> "CountFunction":
        rows = []
        for n, line in enumerate(text.splitlines(), 1):
            tok = line.split("#", 1)[0].split()
            if not tok:
                continue
            if len(tok) != 2:
                raise ValueError(f"line {n}: expected 'tau count'")
            rows.append((Fraction(tok[0]), int(tok[1])))
        return cls(tuple(rows))


def geometric_taus(lo, hi, per_octave: int = 4) -> list[Fraction]:
    """Roughly geometric exact sample points from ``lo`` to ``hi``."""
    out = []
    t = float(lo)
    f = 2 ** (1 / per_octave)
    while t <= float(hi) * (1 + 1e-12):
        out.append(Fraction(t).limit_denominator(1000))
        t *= f
    if out[-1] != _q(hi):
        out.append(_q(hi))
    return sorted(set(out))


def growth_exponent(cf: CountFunction) -> float:
    """Polynomial growth degree ``limsup log r / log tau`` of a count function.

    Returns ``-inf`` when ``r`` vanishes identically and ``inf`` when the
    local log-log slope at least doubles across the upper half of the
    sampled range (super-polynomial growth).  Otherwise the estimate is a
    least-squares slope through the upper convex envelope of the points in
    the upper half (in log tau) of the samples.
    """
    pts = [(t, r) for t, r in cf.samples if t > 0]
    if len(pts) < 3:
        raise InsufficientSamples("need at least 3 samples")
    if all(r == 0 for _, r in pts):
        return -INF
    if pts[-1][0] < 100 * pts[0][0]:
        raise InsufficientSamples("samples must span at least two decades of tau")
    x = np.array([math.log(t) for t, _ in pts])
    mid = (x[0] + x[-1]) / 2
    upper = [(xi, r) for xi, (_, r) in zip(x, pts) if xi >= mid and r > 0]
    if len(upper) < 3:
        raise InsufficientSamples("too few positive samples in the upper half")
    ux = np.array([u for u, _ in upper])
    uy = np.array([math.log(r) for _, r in upper])
    third = max(2, len(ux) // 3)

    def slope(a, b):
        return float(np.polyfit(ux[a:b], uy[a:b], 1)[0])

    first, last = slope(0, third), slope(len(ux) - third, len(ux))
    if last > 2 * max(first, 1.0):
        return INF
    hull = _upper_hull(list(zip(ux, uy)))
    hx = np.array([p[0] for p in hull])
    hy = np.array([p[1] for p in hull])
    if len(hull) < 2:
        hx, hy = ux, uy
    g = float(np.polyfit(hx, hy, 1)[0])
    return 0.0 if g < 1e-9 else g


def _upper_hull(points):
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def image_rank_counts(sys: DirectedSystem, taus: Sequence) -> CountFunction:
    """``r(tau_k)``: total image rank of each stage of a forward system in its limit."""
    trace = direct_limit(sys).trace
    if len(taus) != len(trace):
        raise ValueError("one tau per stage required")
    return CountFunction(tuple(zip(taus, trace)))


def _isqrt_below(limit: np.ndarray) -> np.ndarray:
    """Largest ``m >= 0`` with ``m^2 <= limit`` for a nonnegative int64 array."""
    m = np.floor(np.sqrt(limit.astype(np.float64))).astype(np.int64)
    m += ((m + 1) ** 2 <= limit).astype(np.int64)
    m -= (m ** 2 > limit).astype(np.int64)
    return m


def _ball_points(k: int, rem: int, b2: int) -> int:
    """Number of ``v`` in ``Z^k`` (zero included) with ``b2 |v|^2 < rem``."""
    if rem <= 0:
        return 0
    R = math.isqrt((rem - 1) // b2)
    if k == 1:
        return 2 * R + 1
    if k == 2:
        x = np.arange(-R, R + 1, dtype=np.int64)
        limit = (rem - 1 - b2 * x * x) // b2
        return int(np.sum(2 * _isqrt_below(limit) + 1))
    # peel one coordinate; memory stays linear in R
    total = _ball_points(k - 1, rem, b2)
    for x in range(1, R + 1):
        total += 2 * _ball_points(k - 1, rem - b2 * x * x, b2)
    return total


def lattice_count(n: int, tau) -> int:
    """Number of nonzero ``v`` in ``Z^n`` with ``|v| < tau`` (closed geodesics on the flat torus)."""
    if n < 1:
        raise ValueError("lattice rank must be positive")
    tau = _q(tau)
    if tau <= 0:
        return 0
    a, b = tau.numerator, tau.denominator
    # |v|^2 < tau^2  <=>  b^2 |v|^2 < a^2
    return _ball_points(n, a * a, b * b) - 1


def lattice_count_function(n: int, taus) -> CountFunction:
    return CountFunction.from_callable(lambda t: lattice_count(n, t), taus)


# ---------------------------------------------------------------------------
# torus pieces


@dataclass(frozen=True)
class TorusPieceProfile:
    """Translation speeds ``xi(s) = (xi1, xi2)`` on ``[-S, S]``, linear between samples."""

    samples: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        s = tuple((_q(a), _q(b), _q(c)) for a, b, c in self.samples)
        if len(s) < 2:
            raise ValueError("need at least two samples")
        for (s0, a0, b0), (s1, a1, b1) in zip(s, s[1:]):
            if not s1 > s0:
                raise ValueError("s samples must increase")
            if not (a1 < a0 and b1 > b0):
                raise ValueError("need xi1 strictly decreasing and xi2 strictly increasing")
        # monotone and piecewise linear: positive inside iff nonnegative at the ends
        if s[-1][1] < 0 or s[0][2] < 0:
            raise ValueError("speeds must be positive on the open interval")
        object.__setattr__(self, "samples", s)

    @classmethod
    def linear(cls, S=1) -> "TorusPieceProfile":
        """``xi1 = 1 - sigma``, ``xi2 = sigma`` with ``sigma = (s + S) / 2S``."""
        S = _q(S)
        return cls(((-S, 1, 0), (S, 0, 1)))

    def period(self, p: int, q: int) -> Fraction:
        """Period of the torus whose flow direction is ``(p, q)``."""
        segs = self.samples
        # v(s) = q xi1 - p xi2 is strictly decreasing; its zero is the level
        vals = [q * a - p * b for _, a, b in segs]
        if vals[0] < 0 or vals[-1] > 0:
            raise ValueError(f"direction {(p, q)} not attained")
        i = next(k for k in range(1, len(segs)) if vals[k] <= 0)
        (_, a0, b0), (_, a1, b1) = segs[i - 1], segs[i]
        lam = vals[i - 1] / (vals[i - 1] - vals[i])
        xi1 = a0 + lam * (a1 - a0)
        xi2 = b0 + lam * (b1 - b0)
        # T xi = (p, q), and xi1 + xi2 > 0 even where one speed vanishes
        return (p + q) / (xi1 + xi2)

    def periods_approx(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Floating-point :meth:`period` for arrays of directions."""
        S = np.array([[float(a), float(b)] for _, a, b in self.samples])
        p = p.astype(np.float64)[:, None]
        q = q.astype(np.float64)[:, None]
        vals = q * S[None, :, 0] - p * S[None, :, 1]
        i = np.argmax(vals <= 0, axis=1)
        i = np.clip(i, 1, len(S) - 1)
        rows = np.arange(len(i))
        v0, v1 = vals[rows, i - 1], vals[rows, i]
        lam = v0 / (v0 - v1)
        s0, s1 = S[i - 1], S[i]
        speed = (s0[:, 0] + s0[:, 1]) + lam * ((s1[:, 0] + s1[:, 1]) - (s0[:, 0] + s0[:, 1]))
        return (p[:, 0] + q[:, 0]) / speed

    def dumps(self) -> str:
        return "".join(f"{s} {a} {b}\n" for s, a, b in self.samples)

    @classmethod
    def loads(cls, text: str) -> "TorusPieceProfile":
        rows = []
        for n, line in enumerate(text.splitlines(), 1):
            tok = line.split("#", 1)[0].split()
            if not tok:
                continue
            if len(tok) != 3:
                raise ValueError(f"line {n}: expected 's xi1 xi2'")
            rows.append(tuple(Fraction(x) for x in tok))
        return cls(tuple(rows))


def _period_below(tp: TorusPieceProfile, p: np.ndarray, q: np.ndarray, tau: Fraction) -> np.ndarray:
    """``period(p, q) < tau`` elementwise; exact rechecks near the threshold."""
    T = tp.periods_approx(p, q)
    t = float(tau)
    out = T < t
    close = np.nonzero(np.abs(T - t) <= 1e-9 * t)[0]
    for j in close:
        out[j] = tp.period(int(p[j]), int(q[j])) < tau
    return out


def count_torus_orbits(tp: TorusPieceProfile, tau) -> int:
    """Number of periodic tori (iterates included) with period ``< tau``.

    The direction ``(p, q)`` is attained iff ``q / p`` lies between the
    speed ratios at the two ends.  From ``T xi = (p, q)`` the period is
    ``p / xi1`` and ``q / xi2``, so it grows in ``q`` for fixed ``p`` (the
    level moves right and ``xi1`` drops) and ``p < tau max(xi1)``.  For
    each ``p`` the admissible ``q`` therefore form an interval, found by a
    joint bisection over all ``p``.
    """
    tau = _q(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    (_, a_lo, b_lo), (_, a_hi, b_hi) = tp.samples[0], tp.samples[-1]
    pmax = math.ceil(tau * a_lo) - 1
    qcap = math.ceil(tau * b_hi) - 1
    if pmax < 1 or qcap < 1:
        return 0
    p = np.arange(1, pmax + 1, dtype=np.int64)
    # q / p >= b_lo / a_lo  and  q / p <= b_hi / a_hi (no upper limit when a_hi = 0)
    r_lo = b_lo / a_lo
    qlo = np.maximum(1, -((-p * r_lo.numerator) // r_lo.denominator))
    if a_hi:
        r_hi = b_hi / a_hi
        qhi = np.minimum(qcap, (p * r_hi.numerator) // r_hi.denominator)
    else:
        qhi = np.full(pmax, qcap, dtype=np.int64)
    ok = qlo <= qhi
    p, qlo, qhi = p[ok], qlo[ok], qhi[ok]
    lo, hi = qlo - 1, qhi + 1
    while True:
        act = np.nonzero(hi - lo > 1)[0]
        if not len(act):
            break
        mid = (lo[act] + hi[act]) // 2
        below = _period_below(tp, p[act], mid, tau)
        lo[act] = np.where(below, mid, lo[act])
        hi[act] = np.where(below, hi[act], mid)
    return int((lo - qlo + 1).sum())


def torus_count_function(tp: TorusPieceProfile, taus) -> CountFunction:
    return CountFunction.from_callable(lambda t: count_torus_orbits(tp, t), taus)


# ---------------------------------------------------------------------------
# continuation schedules


@dataclass(frozen=True)
class LogNumber:
    """Exact real ``rational + sum(c_b * log b)`` with rational ``c_b``.

    The bases are pairwise coprime integers ``> 1``, so the log part is
    zero only when every coefficient is.
    """

    rational: Fraction = Fraction(0)
    logs: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def log(cls, x) -> "LogNumber":
        """``log x`` for a positive rational ``x``."""
        x = _q(x)
        if x <= 0:
            raise ValueError("log of a nonpositive number")
        return cls(Fraction(0), _coprime_terms({x.numerator: Fraction(1), x.denominator: Fraction(-1)}))

    @classmethod
    def of(cls, x) -> "LogNumber":
        return x if isinstance(x, LogNumber) else cls(_q(x))

    def __add__(self, other):
        other = LogNumber.of(other)
        terms = dict(self.logs)
        for b, c in other.logs:
            terms[b] = terms.get(b, 0) + c
        return LogNumber(self.rational + other.rational, _coprime_terms(terms))

    def __mul__(self, c):
        if isinstance(c, LogNumber):
            if c.logs and self.logs:
                raise ValueError("product of two logarithmic quantities is not supported")
            if self.logs:
                c = c.rational
            else:
                return c * self.rational
        c = _q(c)
        return LogNumber(self.rational * c, tuple((b, x * c) for b, x in self.logs if x * c))

    __rmul__ = __mul__

    def sign(self) -> int:
        return _sign_log_number(self)

    def __float__(self):
        return float(self.rational) + sum(float(c) * math.log(b) for b, c in self.logs)


def _coprime_terms(terms: dict[int, Fraction]) -> tuple[tuple[int, Fraction], ...]:
    """Rewrite ``sum c_b log b`` over a pairwise coprime set of bases.

    ``c1 log b1 + c2 log b2 = c1 log(b1/g) + (c1+c2) log g + c2 log(b2/g)``
    with ``g = gcd(b1, b2)``, repeated until no two bases share a factor.
    """
    acc: dict[int, Fraction] = {}
    todo = [(b, _q(c)) for b, c in terms.items() if b > 1 and c]
    while todo:
        b, c = todo.pop()
        if b == 1 or not c:
            continue
        for other in list(acc):
            g = math.gcd(b, other)
            if g > 1:
                c2 = acc.pop(other)
                todo.extend([(b // g, c), (g, c + c2), (other // g, c2)])
                break
        else:
            acc[b] = acc.get(b, 0) + c
    return tuple(sorted((b, c) for b, c in acc.items() if c))


def _sign_log_number(x: LogNumber) -> int:
    """Exact sign of ``a + sum c_b log b``.

    With ``a = 0`` this is a comparison of rational powers of integers and
    is decided in integer arithmetic.  With ``a != 0`` the value cannot be
    zero (``e^a`` is transcendental), so refining interval bounds terminates.
    """
    if not x.logs:
        return (x.rational > 0) - (x.rational < 0)
    if x.rational == 0:
        den = 1
        for _, c in x.logs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num, dnm = 1, 1
        for b, c in x.logs:
            e = c * den
            if e > 0:
                num *= b ** int(e)
            else:
                dnm *= b ** int(-e)
        return (num > dnm) - (num < dnm)
    import mpmath
    iv = mpmath.iv
    saved = iv.prec
    prec = 64
    try:
        while prec <= 1 << 16:
            iv.prec = prec
            val = iv.mpf(x.rational.numerator) / x.rational.denominator
            for b, c in x.logs:
                val += iv.log(iv.mpf(b)) * (iv.mpf(c.numerator) / c.denominator)
            if val.a > 0:
                return 1
            if val.b < 0:
                return -1
            prec *= 2
    finally:
        iv.prec = saved
    raise ArithmeticError("sign undecided")


@dataclass(frozen=True)
class ScheduleBound:
    """``D = exp(exponent)``, the minimal ratio ``tau_- / tau_+`` for a continuation."""

    exponent: LogNumber

    def admissible(self, tau_plus, tau_minus) -> bool:
        """``tau_minus >= D * tau_plus``, decided exactly."""
        tp, tm = _q(tau_plus), _q(tau_minus)
        if tp <= 0 or tm <= 0:
            raise ValueError("slopes must be positive")
        # log(tm / tp) - exponent >= 0
        return (LogNumber.log(tm / tp) + self.exponent * -1).sign() >= 0

    def compare(self, x) -> int:
        """Sign of ``D - x`` for rational ``x > 0``."""
        return (self.exponent + LogNumber.log(x) * -1).sign()

    def __float__(self):
        return math.exp(float(self.exponent))

    def value(self, prec: int = 60):
        import mpmath
        with mpmath.workdps(prec):
            e = mpmath.mpf(self.exponent.rational.numerator) / self.exponent.rational.denominator
            for b, c in self.exponent.logs:
                e += mpmath.log(b) * mpmath.mpf(c.numerator) / c.denominator
            return mpmath.exp(e)

    def tau_minus(self, tau_plus) -> float:
        """``e^{length C} (tau_+ + 1) - 1``, the endpoint of the decay schedule."""
        import mpmath
        with mpmath.workdps(40):
            return float(self.value(40) * (mpmath.mpf(float(_q(tau_plus))) + 1) - 1)


def schedule_gap(C, length) -> ScheduleBound:
    """Minimal continuation ratio ``exp(length * C)`` for the decay condition.

    ``C`` is rational; ``length`` is rational or a :class:`LogNumber`
    (for instance ``LogNumber.log(2)``).
    """
    Cq = _q(C)
    if Cq < 0:
        raise ValueError("C must be nonnegative")
    L = LogNumber.of(length)
    if L.sign() <= 0:
        raise ValueError("interval length must be positive")
    return ScheduleBound(L * Cq)


@dataclass(frozen=True)
class LadderVerdict:
    ok: bool
    witness: Fraction | None = None
    exponents: tuple[float, float] | None = None
    reason: str = ""


def ladder_verify(r_plus: CountFunction, r_minus: CountFunction, D, tau_range,
                  samples: int = 40, tol: float = 0.05) -> LadderVerdict:
    """Check ``r+(tau) <= r-(D tau) <= r+(D^2 tau)`` and compare growth exponents."""
    D = _q(D)
    if D <= 1:
        raise ValueError("D must exceed 1")
    lo, hi = (_q(t) for t in tau_range)
    taus = geometric_taus(lo, hi, per_octave=max(1, samples // max(1, int(math.log2(hi / lo)))))
    for t in taus:
        a, b, c = r_plus(t), r_minus(D * t), r_plus(D * D * t)
        if not a <= b:
            return LadderVerdict(False, t, reason=f"r+({t}) = {a} > r-({D * t}) = {b}")
        if not b <= c:
            return LadderVerdict(False, t, reason=f"r-({D * t}) = {b} > r+({D * D * t}) = {c}")
    gp = growth_exponent(CountFunction.from_callable(r_plus, taus))
    gm = growth_exponent(CountFunction.from_callable(r_minus, taus))
    same = (gp == gm) or (math.isfinite(gp) and math.isfinite(gm) and abs(gp - gm) <= tol)
    if not same:
        return LadderVerdict(False, None, (gp, gm), "growth exponents differ")
    return LadderVerdict(True, None, (gp, gm))
