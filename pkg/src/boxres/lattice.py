"""Multi-indices, shuffles and axis-aligned boxes in N^m.

Coordinates of a box are 1-based (``j`` holds values in ``1..m``) while a
multi-index is a plain tuple indexed from 0, so coordinate ``c`` of ``n`` is
``n[c - 1]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

MultiIndex = tuple[int, ...]
Shuffle = tuple[int, ...]


class DimensionError(ValueError):
    pass


def multi_index(entries: Iterable[int], m: int | None = None) -> MultiIndex:
    n = tuple(int(x) for x in entries)
    if not n:
        raise DimensionError("a multi-index needs at least one entry")
    if any(x < 0 for x in n):
        raise ValueError(f"negative exponent in {n}")
    if m is not None and len(n) != m:
        raise DimensionError(f"expected {m} entries, got {len(n)}")
    return n


def degree(n: Sequence[int]) -> int:
    return sum(n)


def shift(n: MultiIndex, p: int, by: int = 1) -> MultiIndex:
    """Return ``n + by * e_p`` (``p`` is 1-based)."""
    out = list(n)
    out[p - 1] += by
    return tuple(out)


@dataclass(frozen=True, order=True)
class Box:
    """The set of n in N^m with ``n[j_k - 1] <= b_k`` for every capped ``j_k``.

    Construction canonicalizes: ``j`` is sorted, caps follow their coordinates,
    and a coordinate listed twice keeps the smaller cap.
    """

    m: int
    j: Shuffle = ()
    b: tuple[int, ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise DimensionError("ambient dimension must be >= 1")
        if len(self.j) != len(self.b):
            raise ValueError("j and b must have the same length")
        caps: dict[int, int] = {}
        for c, cap in zip(self.j, self.b):
            c, cap = int(c), int(cap)
            if not 1 <= c <= self.m:
                raise ValueError(f"capped coordinate {c} outside [1, {self.m}]")
            if cap < 0:
                raise ValueError(f"negative cap {cap}")
            caps[c] = min(cap, caps.get(c, cap))
        j = tuple(sorted(caps))
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "b", tuple(caps[c] for c in j))

    @property
    def q(self) -> int:
        return len(self.j)

    @property
    def caps(self) -> dict[int, int]:
        return dict(zip(self.j, self.b))

    @property
    def is_finite(self) -> bool:
        return self.q == self.m

    def __contains__(self, n) -> bool:
        return box_contains(self, n)

    def __str__(self) -> str:
        if not self.j:
            return f"N^{self.m}"
        return " & ".join(f"n{c}<={cap}" for c, cap in zip(self.j, self.b))


def full_space(m: int) -> Box:
    return Box(m)


def _check_dim(m: int, n: Sequence[int]) -> None:
    if len(n) != m:
        raise DimensionError(f"multi-index {tuple(n)} has dimension {len(n)}, expected {m}")


def box_contains(box: Box, n: Sequence[int]) -> bool:
    _check_dim(box.m, n)
    return all(n[c - 1] <= cap for c, cap in zip(box.j, box.b))


def intersect_boxes(a: Box, b: Box) -> Box:
    if a.m != b.m:
        raise DimensionError(f"boxes live in N^{a.m} and N^{b.m}")
    # Box() keeps the min cap on shared coordinates
    return Box(a.m, a.j + b.j, a.b + b.b)


def intersect_family(boxes: Sequence[Box], index: Sequence[int]) -> Box:
    """Intersection of ``boxes[i - 1]`` over the 1-based indices in ``index``."""
    if not index:
        raise ValueError("cannot intersect an empty family")
    for i in index:
        if not 1 <= i <= len(boxes):
            raise IndexError(f"box index {i} outside [1, {len(boxes)}]")
    return reduce(intersect_boxes, (boxes[i - 1] for i in index))


def shuffles(q: int, k: int) -> list[Shuffle]:
    """All strictly increasing q-tuples from 1..k in lexicographic order."""
    if q < 0 or q > k:
        raise ValueError(f"no {q}-shuffles of [1, {k}]")
    return list(itertools.combinations(range(1, k + 1), q))


def box_is_subset(a: Box, b: Box) -> bool:
    if a.m != b.m:
        raise DimensionError(f"boxes live in N^{a.m} and N^{b.m}")
    a_caps = a.caps
    return all(c in a_caps and a_caps[c] <= cap for c, cap in zip(b.j, b.b))


def grid(m: int, M: int) -> list[MultiIndex]:
    """[0, M)^m in lexicographic order."""
    return list(itertools.product(range(M), repeat=m))


def enumerate_box_truncated(box: Box, M: int) -> list[MultiIndex]:
    if M < 1:
        raise ValueError("truncation M must be >= 1")
    caps = box.caps
    ranges = [range(min(caps[c] + 1, M)) if c in caps else range(M)
              for c in range(1, box.m + 1)]
    return list(itertools.product(*ranges))


def count_box_truncated(box: Box, M: int) -> int:
    count = M ** (box.m - box.q)
    for cap in box.b:
        count *= min(cap + 1, M)
    return count
