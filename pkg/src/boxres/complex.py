"""Truncated box resolution A_0 -> A_1 -> ... -> A_k of a monomial ideal.

A_q is the direct sum, over q-subsets I of the k boxes, of the span of the
basis monomials lying in the intersection box B_I. Psi_q copies a coefficient
at exponent n from component I' to every component I = I' + {s} whose box
still contains n, with sign (-1)^(i-1) where I' drops the i-th smallest
element of I. Every map therefore preserves the exponent n, and truncating
to [0, M)^m is the same as restricting the infinite complex.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .exact import Surd, dense_rank, sparse_nullspace, sparse_rank
from .ideal import MonomialIdeal, UnitIdealError, boxes_from_generators, monomial_in_ideal
from .lattice import (Box, MultiIndex, Shuffle, box_contains, enumerate_box_truncated,
                      grid, intersect_family, shift, shuffles)
from .toeplitz import shift_weight_sq

NORM_TOL = 1e-10
NORM_SLACK = 1e-9


class BasisLabel(NamedTuple):
    level: int
    component: Shuffle
    n: MultiIndex


@dataclass(frozen=True)
class SignMatrix:
    """Sparse +-1 matrix from level ``q`` labels (cols) to level ``q+1`` (rows)."""

    rows: tuple[BasisLabel, ...]
    cols: tuple[BasisLabel, ...]
    entries: dict[tuple[int, int], int]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def row_dicts(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [dict() for _ in self.rows]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def to_dense(self) -> np.ndarray:
        a = np.zeros(self.shape)
        for (i, j), v in self.entries.items():
            a[i, j] = v
        return a

    def compose(self, first: SignMatrix) -> dict[tuple[int, int], int]:
        """Exact integer product ``self @ first`` as a sparse dict (zeros dropped)."""
        by_row: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for (i, j), v in first.entries.items():
            by_row[i].append((j, v))
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (i, mid), v in self.entries.items():
            for j, w in by_row.get(mid, ()):
                out[i, j] += v * w
        return {key: v for key, v in out.items() if v}


@dataclass
class BoxComplex:
    ideal: MonomialIdeal | None
    boxes: list[Box]
    M: int
    bases: list[list[BasisLabel]] = field(default_factory=list)
    psi: list[SignMatrix] = field(default_factory=list)
    component_boxes: list[dict[Shuffle, Box]] = field(default_factory=list)
    index: list[dict[BasisLabel, int]] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.boxes)

    @property
    def m(self) -> int:
        return self.boxes[0].m

    def dims(self) -> list[int]:
        return [len(b) for b in self.bases]


def complex_from_boxes(boxes: list[Box], M: int, ideal: MonomialIdeal | None = None) -> BoxComplex:
    """Build the truncated complex for an ordered list of boxes."""
    if M < 1:
        raise ValueError("truncation M must be >= 1")
    if not boxes:
        raise ValueError("need at least one box")
    m = boxes[0].m
    cx = BoxComplex(ideal=ideal, boxes=list(boxes), M=M)
    cx.component_boxes.append({(): Box(m)})
    cx.bases.append([BasisLabel(0, (), n) for n in grid(m, M)])
    for q in range(1, cx.k + 1):
        comps = {I: intersect_family(boxes, I) for I in shuffles(q, cx.k)}
        cx.component_boxes.append(comps)
        cx.bases.append([BasisLabel(q, I, n) for I, box in comps.items()
                         for n in enumerate_box_truncated(box, M)])
    cx.index = [{lab: i for i, lab in enumerate(basis)} for basis in cx.bases]
    cx.psi = [build_psi(cx, q) for q in range(cx.k)]
    return cx


def build_complex(ideal: MonomialIdeal, M: int = 8, dedupe: bool = True) -> BoxComplex:
    if ideal.is_unit:
        raise UnitIdealError(f"{ideal} is the unit ideal; there is no quotient to resolve")
    return complex_from_boxes(boxes_from_generators(ideal, dedupe), M, ideal)


def build_psi(cx: BoxComplex, q: int) -> SignMatrix:
    if not 0 <= q < cx.k:
        raise ValueError(f"Psi_{q} undefined for k={cx.k}")
    rows, cols = cx.bases[q + 1], cx.bases[q]
    col_index = cx.index[q]
    entries: dict[tuple[int, int], int] = {}
    for r, lab in enumerate(rows):
        for i in range(q + 1):
            face = lab.component[:i] + lab.component[i + 1:]
            c = col_index[BasisLabel(q, face, lab.n)]
            entries[r, c] = -1 if i % 2 else 1
    return SignMatrix(tuple(rows), tuple(cols), entries)


# -- reports -------------------------------------------------------------------

@dataclass
class Check:
    name: str
    expected: int | float
    actual: int | float
    passed: bool
    level: int | None = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "expected": self.expected, "actual": self.actual,
             "passed": self.passed}
        if self.level is not None:
            d["level"] = self.level
        return d


@dataclass
class ExactnessReport:
    dims: list[int]
    ranks: list[int]
    kernels: list[int]
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"dims": self.dims, "ranks": self.ranks, "kernel_dims": self.kernels,
                "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def psi_ranks(cx: BoxComplex) -> list[int]:
    return [sparse_rank(p.row_dicts()) for p in cx.psi]


def count_ideal_monomials(ideal: MonomialIdeal, M: int) -> int:
    return sum(monomial_in_ideal(ideal, n) for n in grid(ideal.m, M))


def exactness_report(cx: BoxComplex) -> ExactnessReport:
    dims = cx.dims()
    ranks = psi_ranks(cx)
    # Psi_k is the zero map out of A_k
    kernels = [dims[q] - ranks[q] for q in range(cx.k)] + [dims[cx.k]]
    checks: list[Check] = []
    for q in range(cx.k - 1):
        nnz = len(cx.psi[q + 1].compose(cx.psi[q]))
        checks.append(Check("psi_squared_zero", 0, nnz, nnz == 0, q))
    for q in range(1, cx.k + 1):
        checks.append(Check("ker_equals_image", ranks[q - 1], kernels[q],
                            kernels[q] == ranks[q - 1], q))
    checks.append(Check("surjective_last", dims[cx.k], ranks[cx.k - 1],
                        ranks[cx.k - 1] == dims[cx.k], cx.k - 1))
    if cx.ideal is not None:
        count = count_ideal_monomials(cx.ideal, cx.M)
        checks.append(Check("ker_psi0_is_ideal", count, kernels[0], kernels[0] == count, 0))
    return ExactnessReport(dims, ranks, kernels, checks)


@dataclass
class DegreeReport:
    n: MultiIndex
    containing: list[int]
    dims: list[int]
    ranks: list[int]
    homology: list[int]
    passed: bool

    def to_dict(self) -> dict:
        return {"n": list(self.n), "boxes_containing": self.containing, "dims": self.dims,
                "ranks": self.ranks, "homology": self.homology, "passed": self.passed}


def per_degree_oracle(cx: BoxComplex, n: MultiIndex) -> DegreeReport:
    """Exactness of the complex restricted to the single exponent ``n``.

    Built from box membership alone (never from ``cx.psi``): level q is
    spanned by the q-subsets of the boxes containing n, and the maps are the
    alternating face maps of a full simplex. Ranks use dense Bareiss
    elimination, independent of the sparse path used globally.
    """
    if len(n) != cx.m or any(not 0 <= x < cx.M for x in n):
        raise ValueError(f"{n} outside [0, {cx.M})^{cx.m}")
    containing = [i for i, box in enumerate(cx.boxes, 1) if box_contains(box, n)]
    levels = [list(itertools.combinations(containing, q)) for q in range(cx.k + 1)]
    dims = [len(lv) for lv in levels]
    ranks = []
    for q in range(cx.k):
        pos = {I: c for c, I in enumerate(levels[q])}
        mat = [[0] * dims[q] for _ in range(dims[q + 1])]
        for r, J in enumerate(levels[q + 1]):
            for i in range(len(J)):
                mat[r][pos[J[:i] + J[i + 1:]]] = (-1) ** i
        ranks.append(dense_rank(mat) if dims[q] and dims[q + 1] else 0)
    ranks_ext = ranks + [0]
    homology = [dims[0] - ranks_ext[0]]
    homology += [dims[q] - ranks_ext[q] - ranks_ext[q - 1] for q in range(1, cx.k + 1)]
    expected = [1 if not containing else 0] + [0] * cx.k
    return DegreeReport(tuple(n), containing, dims, ranks, homology, homology == expected)


@dataclass
class NormReport:
    q: int
    norm_sq: float
    bound: int
    passed: bool

    def to_dict(self) -> dict:
        return {"q": self.q, "norm_sq": self.norm_sq, "bound": self.bound, "passed": self.passed}


def _blocks_by_degree(mat: SignMatrix) -> dict[MultiIndex, list[tuple[int, int, int]]]:
    blocks: dict[MultiIndex, list[tuple[int, int, int]]] = defaultdict(list)
    for (i, j), v in mat.entries.items():
        blocks[mat.cols[j].n].append((i, j, v))
    return blocks


def psi_norm(cx: BoxComplex, q: int) -> float:
    """Largest singular value of Psi_q.

    Psi_q is block diagonal over exponents, so the norm is the maximum over
    blocks; each block's top eigenvalue of B^T B comes from a symmetric
    eigensolver. Blocks with the same sparsity pattern are solved once.
    """
    best = 0.0
    seen: dict[tuple, float] = {}
    for entries in _blocks_by_degree(cx.psi[q]).values():
        rows = {i: r for r, i in enumerate(sorted({e[0] for e in entries}))}
        cols = {j: c for c, j in enumerate(sorted({e[1] for e in entries}))}
        key = tuple(sorted((rows[i], cols[j], v) for i, j, v in entries))
        if key not in seen:
            b = np.zeros((len(rows), len(cols)))
            for r, c, v in key:
                b[r, c] = v
            seen[key] = float(np.linalg.eigvalsh(b.T @ b)[-1])
        best = max(best, seen[key])
    return math.sqrt(best)


def psi_norm_bound_check(cx: BoxComplex, q: int) -> NormReport:
    if not 0 <= q < cx.k:
        raise ValueError(f"Psi_{q} undefined for k={cx.k}")
    norm = psi_norm(cx, q)
    bound = (cx.k - q) * (q + 1)
    return NormReport(q, norm * norm, bound, norm * norm <= bound + NORM_SLACK)


def kernel_basis(cx: BoxComplex, q: int) -> list[dict[int, Fraction]]:
    """Exact rational basis of ker Psi_q as sparse vectors over level-q indices."""
    if not 0 <= q <= cx.k:
        raise ValueError(f"level {q} outside [0, {cx.k}]")
    if q == cx.k:
        return [{i: Fraction(1)} for i in range(len(cx.bases[q]))]
    return sparse_nullspace(cx.psi[q].row_dicts(), len(cx.bases[q]))


# -- module structure ----------------------------------------------------------

def _shift_level(cx: BoxComplex, q: int, lab: BasisLabel, p: int) -> dict[int, Surd]:
    """T_{z_p} on the level-q basis vector ``lab``, componentwise."""
    target = shift(lab.n, p)
    if target[p - 1] >= cx.M or not box_contains(cx.component_boxes[q][lab.component], target):
        return {}
    return {cx.index[q][BasisLabel(q, lab.component, target)]: Surd.sqrt(shift_weight_sq(lab.n, p))}


def _apply_psi(cx: BoxComplex, q: int, vec: dict[int, Surd]) -> dict[int, Surd]:
    by_col: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for (i, j), v in cx.psi[q].entries.items():
        if j in vec:
            by_col[j].append((i, v))
    out: dict[int, Surd] = {}
    for j, x in vec.items():
        for i, v in by_col.get(j, ()):
            out[i] = out.get(i, Surd()) + x * v
    return {i: v for i, v in out.items() if v}


@dataclass
class MorphismReport:
    q: int
    p: int
    tested: int
    failures: list[BasisLabel]

    @property
    def passed(self) -> bool:
        return not self.failures


def module_morphism_check(cx: BoxComplex, q: int, p: int) -> MorphismReport:
    """Check Psi_q T_p = T_p Psi_q on basis vectors whose z_p shift stays
    inside the truncation."""
    failures = []
    tested = 0
    for idx, lab in enumerate(cx.bases[q]):
        if lab.n[p - 1] + 1 >= cx.M:
            continue
        tested += 1
        lhs = _apply_psi(cx, q, _shift_level(cx, q, lab, p))
        rhs: dict[int, Surd] = {}
        for i, v in _apply_psi(cx, q, {idx: Surd.rational(1)}).items():
            for i2, w in _shift_level(cx, q + 1, cx.bases[q + 1][i], p).items():
                rhs[i2] = rhs.get(i2, Surd()) + v * w
        rhs = {i: v for i, v in rhs.items() if v}
        if lhs != rhs:
            failures.append(lab)
    return MorphismReport(q, p, tested, failures)
