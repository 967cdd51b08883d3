from __future__ import annotations

import pytest

from higherhh import GF, QQ, LodayComplex, LodaySpec, homology_dims, poly_weight_capped, torus
from higherhh.torusdiag import (
    MultiMatrixChain, TorusDiagError, TotalComplexBlock, diagonal_class, ones, part2_rewrite, part2_rhs,
    part2_trace_check, quotient_poly_image, relation_check, split_move_witness, volume_form,
)


def test_chain_algebra():
    V = ones(2)
    x = MultiMatrixChain.entry(V, 1, (1, 0), QQ)
    y = MultiMatrixChain.entry(V, 1, (0, 1), QQ)
    assert (x * y).terms == (y * x).terms
    assert (x - x).terms == {}
    rec = (x + y).to_records()
    assert MultiMatrixChain.from_records(V, rec, QQ).terms == (x + y).terms


def test_volume_and_diagonal_are_cycles():
    for n in (2, 3):
        block = TotalComplexBlock(n, n, n, QQ)
        assert block.is_cycle(volume_form(n))
        assert block.is_cycle(diagonal_class(n, n))


@pytest.mark.parametrize("n,k", [(2, 2), (2, 3), (3, 3), (3, 4)])
def test_part3(n, k):
    assert relation_check(n, k, 3)["holds"]


@pytest.mark.parametrize("n,k", [(2, 2), (2, 3), (3, 2)])
def test_parts_1_and_2(n, k):
    assert relation_check(n, k, 1)["holds"]
    assert relation_check(n, k, 2)["holds"]


def test_part3_over_F3():
    assert relation_check(2, 2, 3, GF(3))["holds"]


def test_split_moves():
    for place in (0, 1):
        r = split_move_witness(2, 1, (1,), 1, (0,), place)
        assert r["holds"]
        assert r["sign"] == (-1) ** place
    assert split_move_witness(3, 1, (1, 0), 2, (0, 1))["holds"]
    # trivial move: x = 0 gives the unit entry
    assert split_move_witness(2, 0, (1,), 2, (1,))["holds"]


def test_split_move_bad_length():
    with pytest.raises(TorusDiagError):
        split_move_witness(3, 1, (1,), 1, (0, 1))


def test_part2_rewrite():
    assert sorted(part2_rewrite(2, (1, 1), (1, 1))) == sorted(part2_rhs(2, (1, 1), (1, 1)))
    assert part2_rewrite(2, (1, 0), (1, 0)) == []
    assert part2_trace_check(2) and part2_trace_check(3)


def test_solve_boundary_rejects_non_cycle():
    block = TotalComplexBlock(2, 2, 2, QQ)
    V = (2, 0)
    # t at place values 1 and 2 of the first circle: d_1 merges them into t^2
    nc = MultiMatrixChain.entry(V, 1, (1, 0), QQ) * MultiMatrixChain.entry(V, 1, (2, 0), QQ)
    assert not block.is_cycle(nc)
    with pytest.raises(TorusDiagError):
        block.solve_boundary(nc)


def test_quotient_poly():
    r = quotient_poly_image([0, 1, 1])
    assert r["m0"] == 1 and r["leading_class_nonzero"] and r["holds"]
    r = quotient_poly_image([0, 0, 1, 2])
    assert r["m0"] == 2 and r["leading_coefficient"] == "2" and r["holds"]
    with pytest.raises(TorusDiagError):
        quotient_poly_image([1, 1])


@pytest.mark.parametrize("w,expected", [(0, [1, 0, 0]), (1, [0, 2, 1]), (2, [0, 0, 1]), (3, [0, 0, 0])])
def test_matches_loday_on_T2(w, expected):
    tb = TotalComplexBlock(2, w, 2, QQ).homology()
    cx = LodayComplex(LodaySpec(torus(2, 4), poly_weight_capped(QQ, 3), "reduced", None, 3, 3))
    h = homology_dims(cx, weights=[w])
    assert tb == expected == [h.get(d, w) for d in range(3)]


def test_n3_low_weights_match_loday():
    cx = LodayComplex(LodaySpec(torus(3, 5), poly_weight_capped(QQ, 2), "reduced", None, 3, 2))
    for w, expected in [(0, [1, 0, 0, 0]), (1, [0, 3, 3, 1]), (2, [0, 0, 3, 9])]:
        h = homology_dims(cx, weights=[w])
        assert TotalComplexBlock(3, w, 3, QQ).homology() == expected == [h.get(d, w) for d in range(4)]


@pytest.mark.slow
def test_n3_weight3_matches_loday():
    K = GF(32003)
    cx = LodayComplex(LodaySpec(torus(3, 5), poly_weight_capped(K, 3), "reduced", None, 3, 3))
    h = homology_dims(cx, weights=[3])
    assert TotalComplexBlock(3, 3, 3, K).homology() == [h.get(d, 3) for d in range(4)] == [0, 0, 0, 1]
