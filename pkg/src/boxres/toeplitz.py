"""Weighted shifts on Bergman box spaces, truncated to [0, M)^m.

In the orthonormal basis z^n / sqrt(omega(n)), multiplication by z_p sends
the n-th basis vector to sqrt(omega(n + e_p) / omega(n)) times the
(n + e_p)-th. Matrix entries are kept exact as :class:`Surd` values; floats
only appear in norms, singular values and decay fits.

Truncation only corrupts columns whose shift leaves [0, M)^m, so formula
checks are restricted to labels with headroom in every coordinate
(``interior`` labels).
"""

from __future__ import annotations

import io
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .exact import Surd
from .ideal import MonomialIdeal, UnitIdealError, complement_contains
from .lattice import Box, MultiIndex, box_contains, enumerate_box_truncated, shift

SCHEMA_VERSION = 1


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    return 1 if n < 2 else n * factorial(n - 1)


def omega(m: int, s: int, n: Sequence[int]) -> Fraction:
    """Squared norm of z^n in the weighted Bergman space L^2_{a,s}(B^m)."""
    if s < 0:
        raise ValueError("weight parameter s must be >= 0")
    if len(n) != m:
        raise ValueError(f"multi-index {tuple(n)} has dimension {len(n)}, expected {m}")
    num = factorial(m + s)
    for x in n:
        num *= factorial(x)
    return Fraction(num, factorial(sum(n) + s + m))


def shift_weight_sq(n: Sequence[int], p: int, s: int = 0) -> Fraction:
    """omega_s(n + e_p) / omega_s(n): the squared z_p-shift coefficient at n."""
    m = len(n)
    return omega(m, s, shift(tuple(n), p)) / omega(m, s, n)


def _check_coord(m: int, p: int) -> None:
    if not 1 <= p <= m:
        raise ValueError(f"coordinate {p} outside [1, {m}]")


@dataclass
class TruncatedOperator:
    """Sparse exact matrix; ``entries[i, j]`` maps ``cols[j]`` to ``rows[i]``."""

    rows: tuple[MultiIndex, ...]
    cols: tuple[MultiIndex, ...]
    entries: dict[tuple[int, int], Surd]
    M: int
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}
        self._row_index = {n: i for i, n in enumerate(self.rows)}
        self._col_index = {n: j for j, n in enumerate(self.cols)}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def m(self) -> int:
        return len((self.cols or self.rows)[0])

    def entry(self, row: MultiIndex, col: MultiIndex) -> Surd:
        i, j = self._row_index.get(tuple(row)), self._col_index.get(tuple(col))
        if i is None or j is None:
            return Surd()
        return self.entries.get((i, j), Surd())

    def items(self) -> Iterable[tuple[MultiIndex, MultiIndex, Surd]]:
        for (i, j), v in sorted(self.entries.items()):
            yield self.rows[i], self.cols[j], v

    def column(self, col: MultiIndex) -> dict[MultiIndex, Surd]:
        j = self._col_index[tuple(col)]
        return {self.rows[i]: v for (i, jj), v in self.entries.items() if jj == j}

    def adjoint(self) -> TruncatedOperator:
        # all entries are real
        return TruncatedOperator(self.cols, self.rows,
                                 {(j, i): v for (i, j), v in self.entries.items()},
                                 self.M, f"{self.name}*" if self.name else "")

    def __matmul__(self, other: TruncatedOperator) -> TruncatedOperator:
        if self.cols != other.rows:
            raise ValueError("inner bases differ")
        by_row: dict[int, list[tuple[int, Surd]]] = defaultdict(list)
        for (i, j), v in other.entries.items():
            by_row[i].append((j, v))
        out: dict[tuple[int, int], Surd] = {}
        for (i, mid), v in self.entries.items():
            for j, w in by_row.get(mid, ()):
                out[i, j] = out.get((i, j), Surd()) + v * w
        return TruncatedOperator(self.rows, other.cols, out, self.M)

    def __sub__(self, other: TruncatedOperator) -> TruncatedOperator:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("bases differ")
        out = dict(self.entries)
        for key, v in other.entries.items():
            out[key] = out.get(key, Surd()) - v
        return TruncatedOperator(self.rows, self.cols, out, self.M)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def restrict(self, M: int) -> TruncatedOperator:
        """Submatrix on labels with every coordinate < M."""
        keep_r = [i for i, n in enumerate(self.rows) if max(n, default=0) < M]
        keep_c = [j for j, n in enumerate(self.cols) if max(n, default=0) < M]
        rmap = {i: a for a, i in enumerate(keep_r)}
        cmap = {j: a for a, j in enumerate(keep_c)}
        entries = {(rmap[i], cmap[j]): v for (i, j), v in self.entries.items()
                   if i in rmap and j in cmap}
        return TruncatedOperator(tuple(self.rows[i] for i in keep_r),
                                 tuple(self.cols[j] for j in keep_c), entries, M, self.name)

    def is_interior(self, n: MultiIndex) -> bool:
        return all(x + 1 < self.M for x in n)

    def to_dense(self) -> np.ndarray:
        a = np.zeros(self.shape)
        for (i, j), v in self.entries.items():
            a[i, j] = float(v)
        return a

    def singular_values(self) -> np.ndarray:
        """Singular values of the nonzero part (rows/cols that carry entries)."""
        if not self.entries:
            return np.zeros(0)
        rs = sorted({i for i, _ in self.entries})
        cs = sorted({j for _, j in self.entries})
        rmap = {i: a for a, i in enumerate(rs)}
        cmap = {j: a for a, j in enumerate(cs)}
        a = np.zeros((len(rs), len(cs)))
        for (i, j), v in self.entries.items():
            a[rmap[i], cmap[j]] = float(v)
        return np.linalg.svd(a, compute_uv=False)

    # -- export --------------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "M": self.M,
            "rows": [list(n) for n in self.rows],
            "cols": [list(n) for n in self.cols],
            "entries": [[i, j, v.to_pairs()] for (i, j), v in sorted(self.entries.items())],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> TruncatedOperator:
        entries = {(int(i), int(j)): Surd.from_pairs(pairs) for i, j, pairs in obj["entries"]}
        return cls(tuple(tuple(n) for n in obj["rows"]), tuple(tuple(n) for n in obj["cols"]),
                   entries, int(obj["M"]), obj.get("name", ""))

    def write_matrix_market(self, out: TextIO) -> None:
        out.write("%%MatrixMarket matrix coordinate real general\n")
        out.write(f"% {self.name}; rows/cols indexed by lexicographic multi-index order\n")
        out.write(f"{len(self.rows)} {len(self.cols)} {len(self.entries)}\n")
        for (i, j), v in sorted(self.entries.items()):
            out.write(f"{i + 1} {j + 1} {float(v)!r}\n")

    def matrix_market(self) -> str:
        buf = io.StringIO()
        self.write_matrix_market(buf)
        return buf.getvalue()


def read_matrix_market(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("%")]
    nr, nc, _ = map(int, lines[0].split())
    a = np.zeros((nr, nc))
    for ln in lines[1:]:
        i, j, v = ln.split()
        a[int(i) - 1, int(j) - 1] = float(v)
    return a


def _shift_in_box(box: Box, n: MultiIndex, p: int, s: int = 0) -> tuple[MultiIndex, Surd] | None:
    target = shift(n, p)
    if not box_contains(box, target):
        return None
    return target, Surd.sqrt(shift_weight_sq(n, p, s))


def toeplitz_matrix(box: Box, p: int, M: int, s: int = 0) -> TruncatedOperator:
    """Truncated T_{z_p} on the box space: the z_p shift, killed when it leaves the box."""
    _check_coord(box.m, p)
    basis = tuple(enumerate_box_truncated(box, M))
    index = {n: i for i, n in enumerate(basis)}
    entries = {}
    for j, n in enumerate(basis):
        hit = _shift_in_box(box, n, p, s)
        if hit and hit[0] in index:
            entries[index[hit[0]], j] = hit[1]
    return TruncatedOperator(basis, basis, entries, M, f"T_z{p} on {box}", {"s": s})


def projection(basis: Sequence[MultiIndex], keep: Callable[[MultiIndex], bool], M: int) -> TruncatedOperator:
    basis = tuple(basis)
    return TruncatedOperator(basis, basis, {(i, i): Surd.rational(1) for i, n in enumerate(basis) if keep(n)}, M, "P")


def projection_commutator(box: Box, s: int, M: int) -> TruncatedOperator:
    """[P, T_{z_s}] on the full truncated Bergman space, P the box projection."""
    _check_coord(box.m, s)
    full = toeplitz_matrix(Box(box.m), s, M)
    P = projection(full.cols, lambda n: box_contains(box, n), M)
    out = P @ full - full @ P
    out.name = f"[P, T_z{s}] for {box}"
    return out


def projection_commutator_closed_form(box: Box, s: int, n: MultiIndex) -> Surd:
    """The value at (n + e_s, n): -sqrt((b+1)/(|n|+m+1)) on the cap face, else 0."""
    caps = box.caps
    if s in caps and box_contains(box, n) and n[s - 1] == caps[s]:
        return -Surd.sqrt(Fraction(caps[s] + 1, sum(n) + box.m + 1))
    return Surd()


def self_commutator(box: Box, s: int, t: int, M: int) -> TruncatedOperator:
    """T_s* T_t - T_t T_s* on the truncated box space."""
    _check_coord(box.m, s)
    _check_coord(box.m, t)
    Ts, Tt = toeplitz_matrix(box, s, M), toeplitz_matrix(box, t, M)
    out = Ts.adjoint() @ Tt - Tt @ Ts.adjoint()
    out.name = f"[T_z{s}*, T_z{t}] on {box}"
    return out


def self_commutator_column(box: Box, s: int, t: int, n: MultiIndex) -> dict[MultiIndex, Surd]:
    """Column n of the untruncated self-commutator [T_s*, T_t] on the box space."""
    out: dict[MultiIndex, Surd] = defaultdict(Surd)
    hit = _shift_in_box(box, n, t)
    if hit:
        mid, w = hit
        if mid[s - 1] > 0:
            prev = shift(mid, s, -1)
            out[prev] += w * _shift_in_box(box, prev, s)[1]
    if n[s - 1] > 0:
        prev = shift(n, s, -1)
        w = _shift_in_box(box, prev, s)[1]
        hit = _shift_in_box(box, prev, t)
        if hit:
            out[hit[0]] -= w * hit[1]
    return {k: v for k, v in out.items() if v}


def quotient_toeplitz(ideal: MonomialIdeal, p: int, M: int, s: int = 0) -> TruncatedOperator:
    """Compression of T_{z_p} to the span of monomials outside the ideal."""
    if ideal.is_unit:
        raise UnitIdealError(f"{ideal} is the unit ideal")
    _check_coord(ideal.m, p)
    full = toeplitz_matrix(Box(ideal.m), p, M, s)
    keep = [i for i, n in enumerate(full.cols) if complement_contains(ideal, n)]
    pos = {i: a for a, i in enumerate(keep)}
    entries = {(pos[i], pos[j]): v for (i, j), v in full.entries.items() if i in pos and j in pos}
    basis = tuple(full.cols[i] for i in keep)
    return TruncatedOperator(basis, basis, entries, M, f"T_z{p} on Q_{ideal}", {"s": s})


# -- diagnostics ---------------------------------------------------------------

@dataclass
class DecayProfile:
    max_by_degree: dict[int, float]
    exponent: float | None
    fit_range: tuple[int, int]

    def to_dict(self) -> dict:
        return {"max_by_degree": {str(d): v for d, v in sorted(self.max_by_degree.items())},
                "fitted_exponent": self.exponent, "fit_range": list(self.fit_range)}

    def to_csv(self) -> str:
        lines = ["degree,max_abs_entry"]
        lines += [f"{d},{v!r}" for d, v in sorted(self.max_by_degree.items())]
        return "\n".join(lines) + "\n"


def fit_power_law(points: dict[int, float], lo: int, hi: int) -> float | None:
    xs = [d for d, v in points.items() if lo <= d <= hi and v > 0]
    if len(xs) < 2:
        return None
    slope, _ = np.polyfit(np.log(xs), np.log([points[d] for d in xs]), 1)
    return float(slope)


def decay_profile(op: TruncatedOperator, fit_range: tuple[int, int] = (20, 200),
                  interior_only: bool = True) -> DecayProfile:
    """Max |entry| per total degree of the source label, plus a log-log slope."""
    prof: dict[int, float] = {}
    for (i, j), v in op.entries.items():
        col = op.cols[j]
        if interior_only and not op.is_interior(col):
            continue
        d = sum(col)
        prof[d] = max(prof.get(d, 0.0), abs(float(v)))
    return DecayProfile(prof, fit_power_law(prof, *fit_range), fit_range)


def shell_max(box: Box, s: int, t: int, d: int) -> float:
    """Largest |entry| of the untruncated self-commutator over columns of degree d."""
    best = 0.0
    for n in _box_shell(box, d):
        for v in self_commutator_column(box, s, t, n).values():
            best = max(best, abs(float(v)))
    return best


def _box_shell(box: Box, d: int) -> Iterable[MultiIndex]:
    caps = box.caps

    def rec(prefix: tuple[int, ...], left: int):
        c = len(prefix) + 1
        if c == box.m:
            if left <= caps.get(c, left):
                yield prefix + (left,)
            return
        for x in range(min(left, caps.get(c, left)) + 1):
            yield from rec(prefix + (x,), left - x)

    yield from rec((), d)


@dataclass
class SchattenReport:
    p: float
    M_list: list[int]
    sums: list[float]
    sum_ratios: list[float | None]
    increment_ratios: list[float | None]
    verdict: str

    def to_dict(self) -> dict:
        return {"p": self.p, "M": self.M_list, "sums": self.sums, "sum_ratios": self.sum_ratios,
                "increment_ratios": self.increment_ratios, "verdict": self.verdict}


def schatten_partial_sums(op: TruncatedOperator, p: float | Fraction, M_list: Sequence[int]) -> SchattenReport:
    """sum sigma_i^p of the restriction of ``op`` to [0, M)^m for each M.

    Diagnostic only. With M roughly doubling, a convergent series has
    shrinking increments; a log-divergent one (harmonic-like) keeps them
    roughly constant even though the ratio of successive sums tends to 1,
    so the verdict is read from the increments.
    """
    p = float(p)
    if p <= 0:
        raise ValueError("p must be positive")
    Ms = sorted(M_list)
    sums = [float(np.sum(op.restrict(M).singular_values() ** p)) for M in Ms]
    sum_ratios = [sums[i + 1] / sums[i] if sums[i] else None for i in range(len(sums) - 1)]
    inc = [sums[i + 1] - sums[i] for i in range(len(sums) - 1)]
    inc_ratios = [inc[i + 1] / inc[i] if inc[i] else None for i in range(len(inc) - 1)]
    if not any(sums):
        verdict = "zero"
    elif not inc_ratios or inc_ratios[-1] is None:
        verdict = "inconclusive"
    elif inc_ratios[-1] < 0.9:
        verdict = "converging"
    else:
        verdict = "diverging"
    return SchattenReport(p, Ms, sums, sum_ratios, inc_ratios, verdict)


def operator_json(op: TruncatedOperator) -> str:
    return json.dumps(op.to_json_obj(), sort_keys=True)
