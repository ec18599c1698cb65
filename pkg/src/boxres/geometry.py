"""Restriction-map picture of a box space and the formal alternating sum of
its resolution components.

A box with capped coordinates j (q of them) and caps b is the space of
holomorphic sections of a trivial bundle of rank prod(b+1) over the
(m-q)-ball {z_j = 0}; the fiber index i <= b names a jet (derivative order
along the capped coordinates), and that summand carries the weighted
Bergman norm with weight parameter q + |i|.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .complex import BoxComplex
from .exact import Surd
from .lattice import Box, MultiIndex, box_contains, shuffles
from .toeplitz import omega

SIGMA_LABEL = "sigma^e_{q}"


@dataclass(frozen=True)
class BundleData:
    m: int
    j: tuple[int, ...]
    b: tuple[int, ...]
    base_dim: int
    rank: int
    fiber_weights: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"j": list(self.j), "b": list(self.b), "base_dim": self.base_dim,
                "rank": self.rank, "fiber_weights": list(self.fiber_weights)}


def fiber_indices(box: Box) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(cap + 1) for cap in box.b)))


def split_index(box: Box, n: MultiIndex) -> tuple[tuple[int, ...], MultiIndex]:
    """(fiber index on capped coordinates, remaining exponent on the base)."""
    capped = set(box.j)
    fiber = tuple(n[c - 1] for c in box.j)
    base = tuple(x for c, x in enumerate(n, 1) if c not in capped)
    return fiber, base


def restriction_factor(box: Box, n: MultiIndex) -> Surd:
    """Norm of the restricted jet of the n-th orthonormal basis vector.

    Differentiating z^n / sqrt(omega_0(n)) i times along the capped
    coordinates and restricting to {z_j = 0} leaves (prod i!) z^{n'} /
    sqrt(omega_0(n)), measured in L^2_{a, q+|i|} of the (m-q)-ball.
    """
    if not box_contains(box, n):
        raise ValueError(f"{n} is not in {box}")
    fiber, base = split_index(box, n)
    q = box.q
    jet = math.prod(math.factorial(i) for i in fiber)
    # a fully capped box has a point as base; omega in dimension 0 is 1
    ratio = omega(box.m - q, q + sum(fiber), base) / omega(box.m, 0, n)
    return jet * Surd.sqrt(ratio)


def bundle_report(box: Box) -> BundleData:
    fibers = fiber_indices(box)
    return BundleData(box.m, box.j, box.b, box.m - box.q, len(fibers),
                      tuple(box.q + sum(i) for i in fibers))


@dataclass
class KhomTerm:
    level: int
    sign: int
    components: list[tuple[tuple[int, ...], BundleData]]

    def to_dict(self) -> dict:
        return {"level": self.level, "sign": self.sign,
                "essential_spectrum": SIGMA_LABEL.format(q=self.level),
                "components": [{"shuffle": list(I), **data.to_dict()} for I, data in self.components]}


def khom_formal_sum(cx: BoxComplex) -> list[KhomTerm]:
    """[T(Q_I)] = sum_q (-1)^(q-1) [T(A_q)], listed per level with bundle data."""
    terms = []
    for q in range(1, cx.k + 1):
        comps = [(I, bundle_report(cx.component_boxes[q][I])) for I in shuffles(q, cx.k)]
        terms.append(KhomTerm(q, (-1) ** (q - 1), comps))
    return terms
