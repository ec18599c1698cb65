import json
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from boxres.exact import Surd
from boxres.ideal import MonomialIdeal, UnitIdealError
from boxres.lattice import Box, box_contains, shift
from boxres.toeplitz import (TruncatedOperator, decay_profile, omega, projection,
                             projection_commutator, projection_commutator_closed_form,
                             quotient_toeplitz, read_matrix_market, schatten_partial_sums,
                             self_commutator, self_commutator_column, shell_max, shift_weight_sq,
                             toeplitz_matrix)


def test_omega_normalized():
    for m in range(1, 5):
        for s in range(4):
            assert omega(m, s, (0,) * m) == 1


def test_omega_value():
    # 1! 0! 2! / 3!
    assert omega(2, 0, (1, 0)) == Fraction(1, 3)
    with pytest.raises(ValueError):
        omega(2, -1, (0, 0))


def test_shift_ratio_identity():
    rng = random.Random(11)
    for _ in range(1000):
        m = rng.randint(1, 4)
        n = tuple(rng.randint(0, 30) for _ in range(m))
        p = rng.randint(1, m)
        s = rng.randint(0, 3)
        ratio = shift_weight_sq(n, p, s)
        assert ratio == Fraction(n[p - 1] + 1, sum(n) + s + m + 1)
        assert math.isclose(float(ratio), math.exp(
            sum(math.lgamma(x + 1) for x in shift(n, p)) - math.lgamma(sum(n) + 1 + s + m + 1)
            - sum(math.lgamma(x + 1) for x in n) + math.lgamma(sum(n) + s + m + 1)), rel_tol=1e-9)
        assert omega(m, s, n) > 0


def test_toeplitz_examples():
    op = toeplitz_matrix(Box(1, (1,), (0,)), 1, 5)
    assert op.shape == (1, 1) and not op.entries
    full = toeplitz_matrix(Box(2), 1, 4)
    assert full.entry((1, 0), (0, 0)) == Surd.sqrt(Fraction(1, 3))
    with pytest.raises(ValueError):
        toeplitz_matrix(Box(2), 3, 4)


@pytest.mark.parametrize("box", [Box(2), Box(2, (1,), (1,)), Box(3, (1, 3), (1, 0)), Box(3, (2,), (2,))])
def test_toeplitz_commutation_on_interior(box):
    M = 5
    for p in range(1, box.m + 1):
        for pp in range(p + 1, box.m + 1):
            Tp, Tq = toeplitz_matrix(box, p, M), toeplitz_matrix(box, pp, M)
            a, b = Tq @ Tp, Tp @ Tq
            for col in Tp.cols:
                if col[p - 1] + 1 < M and col[pp - 1] + 1 < M:
                    assert a.column(col) == b.column(col)


@pytest.mark.parametrize("box", [Box(2, (1,), (1,)), Box(2, (1, 2), (2, 0)), Box(3, (2,), (1,))])
def test_box_toeplitz_is_compression(box):
    M = 5
    for p in range(1, box.m + 1):
        full = toeplitz_matrix(Box(box.m), p, M)
        P = projection(full.cols, lambda n: box_contains(box, n), M)
        comp = P @ full @ P
        small = toeplitz_matrix(box, p, M)
        for rn, cn, v in comp.items():
            assert small.entry(rn, cn) == v
        assert len(comp.entries) == len(small.entries)


def test_projection_commutator_examples():
    box = Box(2, (1,), (1,))
    assert not projection_commutator(box, 2, 6).entries
    op = projection_commutator(box, 1, 6)
    assert op.entry((2, 0), (1, 0)) == -Surd.sqrt(Fraction(2, 4))
    assert math.isclose(float(op.entry((2, 0), (1, 0))), -math.sqrt(0.5))


@pytest.mark.parametrize("box", [Box(2, (1,), (1,)), Box(2, (1, 2), (3, 2)), Box(3, (1, 3), (1, 0)),
                                 Box(3, (2,), (2,))])
def test_projection_commutator_closed_form(box):
    for s in range(1, box.m + 1):
        op = projection_commutator(box, s, 6)
        support = 0
        for rn, cn, v in op.items():
            assert rn == shift(cn, s)
            assert v == projection_commutator_closed_form(box, s, cn)
            support += 1
        expected = sum(1 for n in op.cols if projection_commutator_closed_form(box, s, n)
                       and max(shift(n, s)) < 6)
        assert support == expected


def test_projection_commutator_shell_magnitudes_decrease():
    box = Box(2, (1,), (1,))
    op = projection_commutator(box, 1, 40)
    prof = decay_profile(op, interior_only=False).max_by_degree
    ds = sorted(prof)
    assert all(prof[a] > prof[b] for a, b in zip(ds, ds[1:]))
    for d in ds:
        assert math.isclose(prof[d], math.sqrt(2 / (d + 3)))


def test_projection_commutator_decay_exponent():
    prof = decay_profile(projection_commutator(Box(2, (1,), (1,)), 1, 202))
    assert abs(prof.exponent + 0.5) <= 0.1


def test_self_commutator_m1():
    op = self_commutator(Box(1), 1, 1, 30)
    for (n,) in op.cols:
        if op.is_interior((n,)):
            assert op.entry((n,), (n,)) == Fraction(n + 1, n + 2) - Fraction(n, n + 1)
    assert not self_commutator(Box(1, (1,), (0,)), 1, 1, 10).entries


def test_self_commutator_decay_exponent_m1():
    prof = decay_profile(self_commutator(Box(1), 1, 1, 202))
    assert abs(prof.exponent + 2) <= 0.4


@pytest.mark.parametrize("box", [Box(2), Box(2, (1,), (1,)), Box(3, (1,), (0,)), Box(3, (2, 3), (1, 2))])
def test_self_commutator_interior_matches_column_formula(box):
    M = 6
    for s in range(1, box.m + 1):
        for t in range(1, box.m + 1):
            op = self_commutator(box, s, t, M)
            for col in op.cols:
                if op.is_interior(col):
                    assert op.column(col) == self_commutator_column(box, s, t, col)


def test_self_commutator_interior_decay_ratio():
    box = Box(2, (1,), (1,))
    for s in (1, 2):
        for t in (1, 2):
            vals = [shell_max(box, s, t, d) for d in range(20, 201, 20)]
            assert all(a > b for a, b in zip(vals, vals[1:]))
            # O(1/d) or faster: doubling the degree at least roughly halves the max entry
            assert shell_max(box, s, t, 200) <= 0.55 * shell_max(box, s, t, 100)


def test_quotient_matches_single_box():
    ideal = MonomialIdeal(2, ((2, 0),))
    for p in (1, 2):
        assert quotient_toeplitz(ideal, p, 6) == toeplitz_matrix(Box(2, (1,), (1,)), p, 6)


def test_quotient_z3_vanishes():
    ideal = MonomialIdeal(3, ((2, 0, 0), (0, 0, 1)))
    assert not quotient_toeplitz(ideal, 3, 5).entries
    with pytest.raises(UnitIdealError):
        quotient_toeplitz(MonomialIdeal(2, ((0, 0),)), 1, 4)


def test_quotient_is_compression_of_full():
    ideal = MonomialIdeal(2, ((2, 3), (4, 1)))
    full = toeplitz_matrix(Box(2), 1, 6)
    keep = lambda n: n not in ideal
    P = projection(full.cols, keep, 6)
    comp = P @ full @ P
    q = quotient_toeplitz(ideal, 1, 6)
    assert {(r, c): v for r, c, v in comp.items()} == {(r, c): v for r, c, v in q.items()}


def test_decay_profile_zero():
    prof = decay_profile(toeplitz_matrix(Box(1, (1,), (0,)), 1, 4))
    assert prof.max_by_degree == {} and prof.exponent is None


def test_schatten_zero():
    rep = schatten_partial_sums(toeplitz_matrix(Box(1, (1,), (0,)), 1, 4), 2, [2, 4])
    assert rep.sums == [0.0, 0.0] and rep.verdict == "zero"
    with pytest.raises(ValueError):
        schatten_partial_sums(toeplitz_matrix(Box(1), 1, 4), 0, [2])


def test_schatten_trace_class_m1():
    op = self_commutator(Box(1), 1, 1, 321)
    rep = schatten_partial_sums(op, 1, [40, 80, 160, 320])
    assert rep.verdict == "converging"
    assert rep.sum_ratios[-1] < 1.01


def test_schatten_projection_commutator_codim_one_box():
    # one free coordinate: singular values sqrt(2/(d+3)), one per degree
    op = projection_commutator(Box(2, (1,), (1,)), 1, 321)
    assert schatten_partial_sums(op, 3, [40, 80, 160, 320]).verdict == "converging"
    # at p = 2 the sum is harmonic, so it diverges logarithmically
    rep = schatten_partial_sums(op, 2, [40, 80, 160, 320])
    assert rep.verdict == "diverging"
    expected = sum(2 / (d + 3) for d in range(1, 321))
    assert math.isclose(rep.sums[-1], expected, rel_tol=1e-9)


def test_json_roundtrip():
    for op in [self_commutator(Box(2, (1,), (1,)), 1, 2, 5), projection_commutator(Box(2, (2,), (0,)), 2, 5)]:
        obj = json.loads(json.dumps(op.to_json_obj()))
        assert TruncatedOperator.from_json_obj(obj) == op


def test_matrix_market_export():
    op = self_commutator(Box(2), 1, 2, 4)
    text = op.matrix_market()
    assert text.startswith("%%MatrixMarket matrix coordinate real general\n")
    assert np.allclose(read_matrix_market(text), op.to_dense())
