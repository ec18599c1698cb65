"""Exact arithmetic: sums of rational multiples of square roots, and exact
Gaussian elimination on sparse integer/rational matrices.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

Rational = Union[int, Fraction]


@lru_cache(maxsize=65536)
def squarefree_split(n: int) -> tuple[int, int]:
    """Write n = s^2 * f with f squarefree; return (s, f)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 1
    s, f = 1, 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        s *= d ** (e // 2)
        if e % 2:
            f *= d
        d += 1 if d == 2 else 2
    return s, f * n


class Surd:
    """An element sum_i r_i * sqrt(t_i) with rational r_i and distinct
    squarefree integers t_i.

    Square roots of distinct squarefree integers are linearly independent
    over Q, so the normalized term tuple is a canonical form and equality is
    exact.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for t, r in items:
            r = Fraction(r)
            if not r:
                continue
            s, f = squarefree_split(int(t))
            if s == 0:
                continue
            acc[f] = acc.get(f, Fraction(0)) + r * s
        self.terms = tuple(sorted((t, r) for t, r in acc.items() if r))

    @classmethod
    def sqrt(cls, x: Rational) -> Surd:
        x = Fraction(x)
        if x < 0:
            raise ValueError(f"sqrt of negative {x}")
        # sqrt(a/b) = sqrt(a*b) / b
        return cls({x.numerator * x.denominator: Fraction(1, x.denominator)})

    @classmethod
    def rational(cls, r: Rational) -> Surd:
        return cls({1: r})

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 1)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.terms[0][1] if self.terms else Fraction(0)

    def square(self) -> Surd:
        return self * self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Surd(list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Surd((t, -r) for t, r in self.terms)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Surd((t1 * t2, r1 * r2) for t1, r1 in self.terms for t2, r2 in other.terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __float__(self):
        return float(sum(float(r) * math.sqrt(t) for t, r in self.terms))

    def __abs__(self):
        return abs(float(self))

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for t, r in self.terms:
            parts.append(str(r) if t == 1 else f"{r}*sqrt({t})")
        return " + ".join(parts)

    def to_pairs(self) -> list[list[str]]:
        """[[r, t], ...] with rationals formatted as "p/q" strings."""
        return [[format_rational(r), str(t)] for t, r in self.terms]

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[str]]) -> Surd:
        return cls((int(Fraction(t)), Fraction(r)) for r, t in pairs)


ZERO = Surd()
ONE = Surd.rational(1)


def _coerce(x):
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Fraction)):
        return Surd.rational(x)
    return NotImplemented


def format_rational(r: Rational) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


# -- sparse exact elimination --------------------------------------------------

SparseRow = dict[int, int]


def _reduce_int(row: SparseRow, pivot: SparseRow, c: int) -> SparseRow:
    a, b = pivot[c], row[c]
    out = {k: a * v for k, v in row.items()}
    for k, v in pivot.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    g = 0
    for v in out.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def sparse_rank(rows: Iterable[Mapping[int, int]]) -> int:
    """Rank of an integer matrix given as sparse rows, by fraction-free
    elimination (row <- a*row - b*pivot, divided by its content)."""
    pivots: dict[int, SparseRow] = {}
    for row in rows:
        r = {k: int(v) for k, v in row.items() if v}
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            r = _reduce_int(r, p, c)
    return len(pivots)


def transpose(rows: Sequence[Mapping[int, int]], ncols: int) -> list[dict[int, int]]:
    cols: list[dict[int, int]] = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    return cols


def sparse_nullspace(rows: Sequence[Mapping[int, Rational]], ncols: int) -> list[dict[int, Fraction]]:
    """Rational basis of {x : A x = 0} for A given by sparse rows.

    Each basis vector has a 1 at one free column and is supported on that
    column plus pivot columns (reduced row echelon form).
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v}
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                lead = r[c]
                pivots[c] = {k: v / lead for k, v in r.items()}
                break
            f = r[c]
            for k, v in p.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    # back substitution to reduced form
    for c in sorted(pivots, reverse=True):
        pc = pivots[c]
        for c2, p2 in pivots.items():
            if c2 < c and c in p2:
                f = p2[c]
                for k, v in pc.items():
                    nv = p2.get(k, 0) - f * v
                    if nv:
                        p2[k] = nv
                    else:
                        p2.pop(k, None)
    by_free: dict[int, dict[int, Fraction]] = {f: {f: Fraction(1)} for f in range(ncols) if f not in pivots}
    for c, p in pivots.items():
        for k, v in p.items():
            if k != c:
                by_free[k][c] = -v
    return [by_free[f] for f in sorted(by_free)]


def dense_rank(matrix: Sequence[Sequence[int]]) -> int:
    """Rank of a small dense integer matrix by Bareiss elimination."""
    a = [list(map(int, row)) for row in matrix]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) // prev
            a[r][col] = 0
        prev = a[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank
