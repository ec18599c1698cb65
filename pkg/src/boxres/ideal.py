"""Monomial ideals and the box decomposition of their staircase complement."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .lattice import Box, DimensionError, MultiIndex, box_is_subset, multi_index


class UnitIdealError(ValueError):
    """The ideal contains 1, so there is nothing to resolve."""


@dataclass(frozen=True)
class MonomialIdeal:
    """Ideal of C[z_1..z_m] generated by monomials z^alpha.

    Generators are minimalized on construction (a generator divisible by
    another one is dropped) and stored sorted, so equal ideals compare equal.
    """

    m: int
    generators: tuple[MultiIndex, ...]

    def __post_init__(self):
        if self.m < 1:
            raise DimensionError("ambient dimension must be >= 1")
        gens = [multi_index(g, self.m) for g in self.generators]
        if not gens:
            raise ValueError("a monomial ideal needs at least one generator")
        gens = sorted(set(gens))
        minimal = [g for g in gens
                   if not any(h != g and divides(h, g) for h in gens)]
        object.__setattr__(self, "generators", tuple(minimal))

    @classmethod
    def from_exponents(cls, exponents: Sequence[Sequence[int]]) -> MonomialIdeal:
        exponents = [tuple(e) for e in exponents]
        if not exponents:
            raise ValueError("a monomial ideal needs at least one generator")
        return cls(len(exponents[0]), tuple(exponents))

    @property
    def is_unit(self) -> bool:
        return any(not any(g) for g in self.generators)

    def __contains__(self, n) -> bool:
        return monomial_in_ideal(self, n)

    def __str__(self) -> str:
        def mono(g):
            parts = [f"z{c}" + (f"^{e}" if e > 1 else "")
                     for c, e in enumerate(g, 1) if e]
            return "*".join(parts) or "1"
        return "<" + ", ".join(mono(g) for g in self.generators) + ">"


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    """z^a divides z^b."""
    return all(x <= y for x, y in zip(a, b))


def monomial_in_ideal(ideal: MonomialIdeal, n: Sequence[int]) -> bool:
    if len(n) != ideal.m:
        raise DimensionError(f"multi-index {tuple(n)} has dimension {len(n)}, expected {ideal.m}")
    return any(divides(g, n) for g in ideal.generators)


def complement_contains(ideal: MonomialIdeal, n: Sequence[int]) -> bool:
    return not monomial_in_ideal(ideal, n)


def candidate_boxes(ideal: MonomialIdeal) -> list[Box | None]:
    """One candidate per choice vector s in [1, m]^l, in product order.

    For each generator alpha_i, the choice s_i names the coordinate on which
    n escapes alpha_i (n[s_i] < alpha_i[s_i]). A candidate whose cap would be
    negative is empty and is reported as None.
    """
    out: list[Box | None] = []
    for choice in itertools.product(range(1, ideal.m + 1), repeat=len(ideal.generators)):
        caps: dict[int, int] = {}
        for c, alpha in zip(choice, ideal.generators):
            caps[c] = min(caps.get(c, alpha[c - 1]), alpha[c - 1])
        if any(v == 0 for v in caps.values()):
            out.append(None)
            continue
        j = tuple(sorted(caps))
        out.append(Box(ideal.m, j, tuple(caps[c] - 1 for c in j)))
    return out


def boxes_from_generators(ideal: MonomialIdeal, dedupe: bool = True) -> list[Box]:
    """Nonempty boxes whose union is the complement of the ideal, sorted.

    With ``dedupe`` boxes contained in another returned box are dropped too.
    """
    boxes = sorted({b for b in candidate_boxes(ideal) if b is not None})
    if dedupe:
        boxes = [a for a in boxes
                 if not any(other != a and box_is_subset(a, other) for other in boxes)]
    return boxes
