"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator), vectors are tuples of fractions and matrices are
tuples of row tuples.  Nothing here ever rounds.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Rational = Fraction
QVector = tuple[Fraction, ...]
QMatrix = tuple[QVector, ...]

_RATIONAL_TOKEN = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_rational(token: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; anything else (decimals, spaces) is rejected."""
    if not _RATIONAL_TOKEN.fullmatch(token):
        raise ValueError(f"not a rational token: {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {token!r}") from None


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vector(values: Iterable) -> QVector:
    return tuple(Fraction(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> QMatrix:
    out = tuple(vector(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("matrix rows have different lengths")
    return out


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a: Sequence, b: Sequence) -> QVector:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> QVector:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a: Sequence) -> QVector:
    return tuple(c * x for x in a)


def rref(m: Sequence[Sequence]) -> tuple[int, QMatrix, list[int]]:
    """Reduced row echelon form.

    Returns ``(rank, reduced, pivot_cols)``.  ``reduced`` has the same shape
    as ``m``; the zero rows sit at the bottom.  The pivot in each column is
    the first nonzero entry at or below the current row.
    """
    rows = [list(map(Fraction, r)) for r in m]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pivot_row = rows[r]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return r, tuple(tuple(row) for row in rows), pivots


def rank(m: Sequence[Sequence]) -> int:
    return rref(m)[0] if m else 0


def nullspace(m: Sequence[Sequence], n_cols: int | None = None) -> list[QVector]:
    """Basis of ``{z : m z = 0}``, one vector per free column."""
    if n_cols is None:
        n_cols = len(m[0])
    if not m:
        return [tuple(Fraction(int(i == j)) for j in range(n_cols)) for i in range(n_cols)]
    rk, red, piv = rref(m)
    free = [c for c in range(n_cols) if c not in piv]
    basis = []
    for f in free:
        z = [Fraction(0)] * n_cols
        z[f] = Fraction(1)
        for i, c in enumerate(piv):
            z[c] = -red[i][f]
        basis.append(tuple(z))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> QVector | None:
    """One solution of ``a z = b`` (free variables set to zero), or None."""
    n_cols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    if not aug:
        return tuple(Fraction(0) for _ in range(n_cols))
    rk, red, piv = rref(aug)
    if piv and piv[-1] == n_cols:
        return None
    z = [Fraction(0)] * n_cols
    for i, c in enumerate(piv):
        z[c] = red[i][n_cols]
    return tuple(z)


def integer_row(values: Sequence) -> tuple[int, ...]:
    """Positive multiple of a rational row with coprime integer entries."""
    den = reduce(math.lcm, (Fraction(v).denominator for v in values), 1)
    ints = [int(Fraction(v) * den) for v in values]
    g = reduce(math.gcd, ints, 0)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def primitive(ints: Sequence[int]) -> tuple[int, ...]:
    g = reduce(math.gcd, ints, 0)
    if g > 1:
        return tuple(x // g for x in ints)
    return tuple(ints)


@dataclass(frozen=True)
class AffineSubspace:
    """``{z : normal . z = offset for every equation}`` inside R^ambient_dim.

    The equations are stored in reduced row echelon form, so two equal
    subspaces always compare equal.
    """

    equations: tuple[tuple[QVector, Fraction], ...]
    ambient_dim: int

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def pivot_cols(self) -> list[int]:
        return [next(i for i, x in enumerate(a) if x != 0) for a, _ in self.equations]

    @property
    def free_cols(self) -> list[int]:
        piv = set(self.pivot_cols)
        return [c for c in range(self.ambient_dim) if c not in piv]

    def contains(self, z: Sequence) -> bool:
        return all(dot(a, z) == b for a, b in self.equations)

    @classmethod
    def from_equations(cls, rows: Iterable[tuple[Sequence, Fraction]], ambient_dim: int) -> "AffineSubspace":
        """Canonicalize an equation system; raises ValueError when inconsistent."""
        aug = [list(map(Fraction, a)) + [Fraction(b)] for a, b in rows]
        if not aug:
            return cls((), ambient_dim)
        rk, red, piv = rref(aug)
        if piv and piv[-1] == ambient_dim:
            raise ValueError("inconsistent equations")
        eqs = tuple((tuple(row[:ambient_dim]), row[ambient_dim]) for row in red[:rk])
        return cls(eqs, ambient_dim)


def affine_hull(points: Sequence[Sequence]) -> AffineSubspace:
    if not points:
        raise ValueError("empty point set")
    base = vector(points[0])
    n = len(base)
    if any(len(p) != n for p in points):
        raise ValueError("points have different dimensions")
    diffs = [sub(p, base) for p in points[1:]]
    diffs = [d for d in diffs if any(d)]
    normals = nullspace(diffs, n) if diffs else nullspace([], n)
    return AffineSubspace.from_equations(((a, dot(a, base)) for a in normals), n)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (-1 for no points)."""
    if not points:
        return -1
    base = points[0]
    diffs = [sub(p, base) for p in points[1:]]
    return rank(diffs) if diffs else 0


def affinely_independent_subset(points: Sequence[Sequence]) -> list[int]:
    """Greedy maximal affinely independent subset, by index, in input order."""
    if not points:
        return []
    chosen = [0]
    base = vector(points[0])
    rows: list[QVector] = []
    for i in range(1, len(points)):
        d = sub(points[i], base)
        if rank(rows + [d]) > len(rows):
            rows.append(d)
            chosen.append(i)
    return chosen


def affine_dependence(points: Sequence[Sequence]) -> QVector:
    """Nonzero ``lam`` with ``sum(lam) == 0`` and ``sum(lam_i * p_i) == 0``.

    The coefficients are scaled to coprime integers with the first nonzero
    one positive.
    """
    if not points:
        raise ValueError("empty point set")
    n = len(points[0])
    # columns are the lifted points (p_i, 1)
    system = [[Fraction(p[r]) for p in points] for r in range(n)]
    system.append([Fraction(1)] * len(points))
    basis = nullspace(system, len(points))
    if not basis:
        raise ValueError("no dependence exists")
    lam = integer_row(basis[0])
    if next(x for x in lam if x != 0) < 0:
        lam = tuple(-x for x in lam)
    return tuple(Fraction(x) for x in lam)
