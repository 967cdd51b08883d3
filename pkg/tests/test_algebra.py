from __future__ import annotations

import pytest

from higherhh.algebra import (
    AlgebraError, WeightOverflow, cyclic_permutation_action, exterior, free_graded_commutative,
    ground_field_algebra, poly_weight_capped, quotient_by_poly, scaling_action, tensor, tensor_power,
    trivial_algebra_action, truncated_poly, validate_action, validate_algebra, Algebra,
)
from higherhh.field import GF, QQ
from higherhh.simplicial import cyclic_group


@pytest.mark.parametrize("A", [
    truncated_poly(QQ, 3), poly_weight_capped(GF(3), 4), quotient_by_poly(QQ, [0, 1, 1]),
    exterior(QQ), ground_field_algebra(GF(2)),
    free_graded_commutative(QQ, [("x", 0, 1), ("e", 1, 1), ("y", 2, 2)], 3, 3),
    tensor(truncated_poly(QQ, 2), exterior(QQ)), tensor_power([truncated_poly(GF(3), 2)] * 3),
])
def test_axioms(A):
    assert validate_algebra(A) == []


def test_truncated_poly_products():
    A = truncated_poly(QQ, 3)
    t = A.index("t")
    assert A.mul({t: 1}, {t: 1}) == {A.index("t^2"): 1}
    assert A.mul({A.index("t^2"): 1}, {t: 1}) == {}


def test_weight_cap_overflow():
    A = poly_weight_capped(QQ, 2)
    with pytest.raises(WeightOverflow):
        A.mul({A.index("t^2"): 1}, {A.index("t"): 1})


def test_exterior_square_zero():
    E = exterior(QQ)
    e = E.index("ex")
    assert E.mul({e: 1}, {e: 1}) == {}
    assert E.degrees[e] == 1


def test_graded_commutativity_sign():
    A = free_graded_commutative(QQ, [("a", 1, 1), ("b", 1, 1)])
    a, b = A.index("a"), A.index("b")
    ab, ba = A.mul({a: 1}, {b: 1}), A.mul({b: 1}, {a: 1})
    assert ab == {k: -v for k, v in ba.items()}


def test_dict_roundtrip():
    A = truncated_poly(GF(5), 3)
    B = Algebra.from_dict(A.to_dict())
    assert B.dim == A.dim and validate_algebra(B) == []


def test_actions_validate():
    A = tensor_power([truncated_poly(GF(3), 2)] * 3)
    assert validate_action(A, cyclic_permutation_action(A)) == []
    E = exterior(QQ)
    assert validate_action(E, scaling_action(E, {"ex": -1})) == []
    assert validate_action(E, trivial_algebra_action(E, cyclic_group(2))) == []


def test_bad_scaling_rejected():
    E = exterior(QQ)
    act = scaling_action(E, {"ex": 2})
    assert validate_action(E, act) != []


def test_quotient_requires_monic_top():
    with pytest.raises(AlgebraError):
        quotient_by_poly(QQ, [])
