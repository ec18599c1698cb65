import math
from fractions import Fraction

import numpy as np
import pytest

from boxres.complex import (BasisLabel, build_complex, build_psi, complex_from_boxes,
                            exactness_report, kernel_basis, module_morphism_check,
                            per_degree_oracle, psi_norm_bound_check, psi_ranks)
from boxres.ideal import MonomialIdeal, UnitIdealError, monomial_in_ideal
from boxres.lattice import Box, count_box_truncated, grid, intersect_family

from conftest import named_ideals, random_ideals, staircase

SQUARE = MonomialIdeal(2, ((2, 2),))
SINGLE = MonomialIdeal(3, ((2, 0, 0), (0, 0, 1)))


def test_dimensions_square_ideal():
    cx = build_complex(SQUARE, 4)
    assert cx.k == 2
    # independent count: prod over capped coords of min(b+1, M) times M per free coord
    expected = [4 ** 2, 2 * 4 + 4 * 2, 2 * 2]
    assert cx.dims() == expected
    per_component = [count_box_truncated(b, 4) for b in cx.component_boxes[1].values()]
    assert per_component == [8, 8]


def test_single_box_is_two_term():
    cx = build_complex(SINGLE, 5)
    assert cx.k == 1
    assert len(cx.psi) == 1


def test_unit_ideal_rejected():
    with pytest.raises(UnitIdealError):
        build_complex(MonomialIdeal(1, ((0,),)), 4)


def test_psi0_for_single_box_is_restriction():
    cx = build_complex(SINGLE, 4)
    psi = cx.psi[0]
    assert set(psi.entries.values()) == {1}
    for (r, c), v in psi.entries.items():
        assert psi.rows[r].n == psi.cols[c].n
    assert len(psi.entries) == len(cx.bases[1])


def test_psi1_signs_for_two_boxes():
    cx = build_complex(SQUARE, 4)
    psi = cx.psi[1]
    # dropping the 1st smallest index (box 1) carries +1, dropping the 2nd carries -1,
    # so the copy from component (2,) is positive and from (1,) negative
    for (r, c), v in psi.entries.items():
        assert v == (-1 if psi.cols[c].component == (1,) else 1)
        assert psi.rows[r].component == (1, 2)
    # each intersection label receives exactly one +1 and one -1
    assert len(psi.entries) == 2 * len(cx.bases[2])


def test_build_psi_range():
    cx = build_complex(SQUARE, 3)
    with pytest.raises(ValueError):
        build_psi(cx, 2)


@pytest.mark.parametrize("name", list(named_ideals()))
def test_multidegree_preservation_and_d_squared(name):
    cx = build_complex(named_ideals()[name], 6)
    for q, psi in enumerate(cx.psi):
        assert all(psi.rows[r].n == psi.cols[c].n for r, c in psi.entries)
        if q + 1 < cx.k:
            assert cx.psi[q + 1].compose(psi) == {}


def test_psi_squared_dense_check():
    cx = build_complex(staircase(2, 3, 4, 1), 5)
    for q in range(cx.k - 1):
        assert not np.any(cx.psi[q + 1].to_dense() @ cx.psi[q].to_dense())


def test_exactness_square_ideal():
    rep = exactness_report(build_complex(SQUARE, 4))
    assert rep.passed
    # I-monomials under the cutoff: both exponents >= 2
    assert rep.kernels[0] == 4


def test_exactness_single_box_projection():
    cx = build_complex(SINGLE, 6)
    rep = exactness_report(cx)
    assert rep.passed
    assert rep.ranks[0] == cx.dims()[1]
    assert rep.kernels[0] == sum(monomial_in_ideal(SINGLE, n) for n in grid(3, 6))


def test_exactness_staircase_at_8():
    cx = build_complex(staircase(2, 3, 4, 1), 8)
    assert cx.k == 3
    assert exactness_report(cx).passed
    for n in grid(2, 8):
        assert per_degree_oracle(cx, n).passed


def test_exactness_without_dedupe():
    cx = build_complex(staircase(2, 3, 4, 1), 7, dedupe=False)
    assert cx.k == 4
    assert exactness_report(cx).passed


def test_oracle_small_cases():
    cx = build_complex(staircase(2, 3, 4, 1), 8)
    inside = per_degree_oracle(cx, (5, 5))
    assert inside.containing == [] and inside.homology == [1, 0, 0, 0] and inside.passed
    one = per_degree_oracle(cx, (0, 5))
    assert len(one.containing) == 1 and one.dims[:2] == [1, 1] and one.ranks[0] == 1 and one.passed
    three = per_degree_oracle(cx, (0, 0))
    # simplicial cochains of a 2-simplex
    assert three.dims == [1, 3, 3, 1]
    assert three.ranks == [1, 2, 1]
    assert three.passed
    with pytest.raises(ValueError):
        per_degree_oracle(cx, (8, 0))


def test_global_equals_sum_of_local():
    for ideal in list(named_ideals().values()) + random_ideals(15, seed=5):
        cx = build_complex(ideal, 5)
        rep = exactness_report(cx)
        local = [per_degree_oracle(cx, n) for n in grid(cx.m, 5)]
        for q in range(cx.k + 1):
            assert sum(r.dims[q] for r in local) == rep.dims[q]
        for q in range(cx.k):
            assert sum(r.ranks[q] for r in local) == rep.ranks[q]


def test_truncation_compatibility():
    ideal = staircase(1, 4, 3, 2)
    small, big = build_complex(ideal, 4), build_complex(ideal, 8)
    for n in grid(2, 4):
        a, b = per_degree_oracle(small, n), per_degree_oracle(big, n)
        assert (a.dims, a.ranks, a.passed) == (b.dims, b.ranks, b.passed)


def test_norm_bounds():
    single = build_complex(SINGLE, 5)
    rep = psi_norm_bound_check(single, 0)
    assert math.isclose(rep.norm_sq, 1.0, abs_tol=1e-10) and rep.passed
    two = build_complex(SQUARE, 5)
    rep = psi_norm_bound_check(two, 1)
    assert math.isclose(rep.norm_sq, 2.0, abs_tol=1e-9) and rep.bound == 2 and rep.passed


def test_norm_matches_dense_svd():
    for ideal in [SQUARE, staircase(2, 3, 4, 1), staircase(1, 4, 3, 2)]:
        cx = build_complex(ideal, 5)
        for q in range(cx.k):
            sv = np.linalg.svd(cx.psi[q].to_dense(), compute_uv=False)[0]
            assert math.isclose(psi_norm_bound_check(cx, q).norm_sq, sv ** 2, rel_tol=1e-10)


def test_kernel_basis_level0():
    cx = build_complex(SQUARE, 4)
    basis = kernel_basis(cx, 0)
    expected = {cx.index[0][BasisLabel(0, (), n)] for n in grid(2, 4) if monomial_in_ideal(SQUARE, n)}
    assert len(basis) == len(expected)
    for vec in basis:
        assert len(vec) == 1
        (idx, val), = vec.items()
        assert idx in expected and val == 1


def test_kernel_basis_consistency():
    cx = build_complex(staircase(2, 3, 4, 1), 5)
    rep = exactness_report(cx)
    for q in range(cx.k + 1):
        basis = kernel_basis(cx, q)
        assert len(basis) == rep.kernels[q]
        if q < cx.k:
            rows = cx.psi[q].row_dicts()
            for vec in basis:
                for row in rows:
                    assert sum(v * vec.get(j, Fraction(0)) for j, v in row.items()) == 0
    assert len(kernel_basis(cx, cx.k)) == cx.dims()[cx.k]


@pytest.mark.parametrize("name", list(named_ideals()))
def test_module_morphism(name):
    cx = build_complex(named_ideals()[name], 5)
    for q in range(cx.k):
        for p in range(1, cx.m + 1):
            rep = module_morphism_check(cx, q, p)
            assert rep.tested > 0
            assert rep.passed, rep.failures[:3]


def test_complex_from_custom_boxes_order_matters_only_for_signs():
    boxes = [Box(2, (1,), (1,)), Box(2, (2,), (1,))]
    a = complex_from_boxes(boxes, 4)
    b = complex_from_boxes(boxes[::-1], 4)
    assert a.dims() == b.dims()
    assert psi_ranks(a) == psi_ranks(b)
    assert intersect_family(boxes, (1, 2)) == a.component_boxes[2][(1, 2)]
