from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from higherhh import (
    GF, QQ, BudgetExceeded, LodayComplex, LodayError, LodaySpec, Twist, TwistingFunction,
    cyclic_group, exterior, homology_dims, poly_weight_capped, sphere, torus, truncated_poly, wedge,
)
from higherhh.algebra import free_graded_commutative, scaling_action
from higherhh.loday import Coefficients, enumerate_basis, monomial_weight
from higherhh.homology import compare_full_vs_normalized


def test_budget_needs_truncation():
    with pytest.raises(BudgetExceeded):
        LodaySpec(sphere(1, 2), truncated_poly(QQ, 2), "reduced", None, 3)


def test_unknown_coefficients():
    with pytest.raises(LodayError):
        LodaySpec(sphere(1, 2), truncated_poly(QQ, 2), "pointed")


def test_twist_on_wrong_space():
    E = exterior(QQ)
    tau = TwistingFunction.from_edges(sphere(1, 3), cyclic_group(2), {"a": 1})
    with pytest.raises(LodayError):
        LodaySpec(sphere(2, 3), E, "unpointed", Twist(tau, scaling_action(E, {"ex": -1})))


def test_point_is_the_algebra():
    from higherhh import point
    cx = LodayComplex(LodaySpec(point(2), truncated_poly(QQ, 3), "unpointed", None, 1))
    assert [len(cx.basis(0, 0, w)) for w in range(3)] == [1, 1, 1]
    assert homology_dims(cx).by_degree() == [3, 0]


def test_circle_level_one_basis():
    cx = LodayComplex(LodaySpec(sphere(1, 3), truncated_poly(QQ, 3), "reduced", None, 2, 2))
    # normalized level 1: a single label on the edge
    assert cx.basis(1, 0, 1) == [((1, 1),)]
    assert cx.basis(1, 0, 2) == [((1, 2),)]
    assert cx.basis(0, 0, 1) == []


def test_basis_sorted_and_normalized():
    cx = LodayComplex(LodaySpec(torus(2, 3), truncated_poly(GF(3), 2), "reduced", None, 2, 3))
    for q in range(3):
        for w in range(4):
            b = cx.basis(q, 0, w)
            assert b == sorted(b)
            assert all(cx.is_normalized(q, m) for m in b)
            assert all(monomial_weight(cx, q, m) == w for m in b)
    assert enumerate_basis(cx.spec, 2, 2, 0) == cx.basis(2, 0, 2)


@pytest.mark.parametrize("spec", [
    LodaySpec(torus(2, 3), truncated_poly(QQ, 3), "reduced", None, 2, 3),
    LodaySpec(wedge(sphere(1, 3), sphere(2, 3)), poly_weight_capped(GF(3), 3), "unpointed", None, 2, 3),
    LodaySpec(sphere(2, 4), free_graded_commutative(QQ, [("e", 1, 1), ("x", 0, 1)], None, 2), "unpointed", None, 3, 2),
])
def test_d_squared_and_weight(spec):
    cx = LodayComplex(spec)
    cx.build_all(check=True)
    for (q, s, w), n in cx.chain_dims().items():
        if q > 0:
            M = cx.differential(q, s, w)
            assert M.ncols == n and M.nrows == len(cx.basis(q - 1, s, w))


def test_twisted_d_squared():
    A = free_graded_commutative(GF(5), [("x", 0, 1), ("e", 1, 1)], None, 3)
    S = sphere(1, 5)
    tau = TwistingFunction.from_edges(S, cyclic_group(2), {"a": 1})
    cx = LodayComplex(LodaySpec(S, A, "unpointed", Twist(tau, scaling_action(A, {"e": -1})), 4, 3))
    cx.build_all(check=True)


def test_general_coefficients_module():
    A = truncated_poly(QQ, 2)
    C = Coefficients.reduced(A)
    assert C.kind == "reduced"
    assert Coefficients.unpointed(A).C is A


@settings(max_examples=12, deadline=None)
@given(st.integers(1, 2), st.integers(2, 3), st.sampled_from([0, 3]))
def test_moore_equals_normalized(n, m, p):
    F = QQ if p == 0 else GF(p)
    spec = LodaySpec(sphere(n, 3), truncated_poly(F, m), "reduced", None, 2, 3)
    assert compare_full_vs_normalized(spec)["equal"]


def test_export_block_roundtrip():
    from higherhh.sparse import SparseMatrix
    cx = LodayComplex(LodaySpec(sphere(1, 3), truncated_poly(QQ, 2), "reduced", None, 2, 2))
    M = SparseMatrix.from_text(cx.export_block(2, 0, 2))
    assert M.triples() == cx.differential(2, 0, 2).triples()
