"""Exact dense linear algebra over Q and prime fields.

Matrices are tuples of row tuples.  Scalars are ``Fraction`` over Q and
plain ``int`` residues over F_p; :class:`Field` hides the difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Matrix = tuple[tuple, ...]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``Field()`` is Q, ``Field(p)`` is F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"field characteristic {self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``q``, ``Q`` or ``fp:<prime>``."""
        t = text.strip().lower()
        if t in ("q", "qq", "rationals"):
            return cls()
        if t.startswith("fp:"):
            return cls(int(t[3:]))
        raise ValueError(f"unknown field {text!r}; expected q or fp:<prime>")

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self):
        return "q" if self.p == 0 else f"fp:{self.p}"

    def __call__(self, x):
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p == 0:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def matrix(self, rows: Sequence[Sequence]) -> Matrix:
        return tuple(tuple(self(x) for x in row) for row in rows)


QQ = Field()


def zeros(nrows: int, ncols: int, field: Field = QQ) -> Matrix:
    z = field(0)
    return tuple(tuple(z for _ in range(ncols)) for _ in range(nrows))


def identity(n: int, field: Field = QQ) -> Matrix:
    one, z = field(1), field(0)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def shape(m: Matrix, ncols: int | None = None) -> tuple[int, int]:
    """Shape of ``m``; an empty row tuple needs ``ncols`` to be meaningful."""
    if not m:
        return 0, (ncols or 0)
    return len(m), len(m[0])


def matmul(a: Matrix, b: Matrix, field: Field = QQ, inner: int | None = None,
           ncols: int | None = None) -> Matrix:
    ra = len(a)
    rb = len(b)
    cb = len(b[0]) if b else (ncols or 0)
    if a and len(a[0]) != rb:
        raise ValueError(f"shape mismatch {len(a[0])} vs {rb}")
    out = []
    for i in range(ra):
        row = a[i]
        acc = [field(0)] * cb
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(cb):
                    if bk[j]:
                        acc[j] += x * bk[j]
        if field.p:
            acc = [v % field.p for v in acc]
        out.append(tuple(acc))
    return tuple(out)


def is_zero(m: Matrix) -> bool:
    return all(x == 0 for row in m for x in row)


def row_reduce(m: Sequence[Sequence], field: Field = QQ):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    rows = [list(field(x) for x in r) for r in m]
    if not rows:
        return [], []
    ncols = len(rows[0])
    p = field.p
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [(x * inv) % p if p else x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                if p:
                    rows[i] = [(x - f * y) % p for x, y in zip(ri, rr)]
                else:
                    rows[i] = [x - f * y for x, y in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: Sequence[Sequence], field: Field = QQ) -> int:
    return len(row_reduce(m, field)[1])


def kernel(m: Sequence[Sequence], ncols: int, field: Field = QQ) -> list[list]:
    """Basis of the right null space of ``m`` (which has ``ncols`` columns)."""
    if not m:
        return [[field(1) if i == j else field(0) for i in range(ncols)]
                for j in range(ncols)]
    rows, pivots = row_reduce(m, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field(0)] * ncols
        v[f] = field(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f] % field.p if field.p else -rows[i][f]
        basis.append(v)
    return basis


def transpose(m: Matrix, ncols: int = 0) -> Matrix:
    if not m:
        return tuple(() for _ in range(ncols))
    return tuple(zip(*m))


def solve(a: Sequence[Sequence], b: Sequence, field: Field = QQ):
    """One solution ``x`` of ``a x = b``, or ``None`` when inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    rows, pivots = row_reduce(aug, field)
    if ncols in pivots:
        return None
    x = [field(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][ncols]
    return x
