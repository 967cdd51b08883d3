from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from higherhh.field import GF, QQ, Field, FieldError
from higherhh.sparse import DimensionError, SparseMatrix, dense_rank, rank, solve


def test_field_basics():
    F = GF(5)
    assert F(7) == 2
    assert F.mul(F.inv(3), 3) == 1
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert Field.from_name("F3") == GF(3)
    assert Field.from_name("Q") == QQ
    assert GF(7).name == "F7" and QQ.name == "Q"


def test_field_errors():
    with pytest.raises(FieldError):
        GF(4)
    with pytest.raises(FieldError):
        Field.from_name("R")
    with pytest.raises(ZeroDivisionError):
        GF(3).inv(0)


def test_parse_roundtrip():
    for F, x in [(QQ, Fraction(-7, 3)), (GF(11), 9)]:
        assert F.parse(F.to_str(x)) == x


def test_text_roundtrip():
    M = SparseMatrix.from_dense([[1, 0, Fraction(1, 2)], [0, 0, -3]], QQ)
    assert SparseMatrix.from_text(M.to_text()).triples() == M.triples()
    assert M.to_text().splitlines()[0] == "2 3 0"


def test_out_of_range_row():
    with pytest.raises(DimensionError):
        SparseMatrix(2, 1, QQ, [{5: 1}])


def test_matmul_shape_error():
    A = SparseMatrix(2, 3, QQ)
    with pytest.raises(DimensionError):
        A.matmul(SparseMatrix(2, 2, QQ))


def test_rank_edge_cases():
    assert rank(SparseMatrix(0, 0, QQ)) == 0
    assert rank(SparseMatrix(3, 4, QQ)) == 0
    assert rank(SparseMatrix.from_dense([[1, 1], [1, 1]], QQ)) == 1
    assert rank(SparseMatrix.from_dense([[1, 1], [1, 2]], GF(2))) == 2
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 1]], GF(3))) == 1


matrices = st.integers(1, 7).flatmap(lambda m: st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices, st.sampled_from([0, 2, 3, 7]))
def test_rank_matches_dense(rows, p):
    F = QQ if p == 0 else GF(p)
    assert rank(SparseMatrix.from_dense(rows, F)) == dense_rank(rows, F)


@settings(max_examples=100, deadline=None)
@given(matrices, st.lists(st.integers(-2, 2), min_size=7, max_size=7), st.sampled_from([0, 3]))
def test_solve_is_exact(rows, x, p):
    F = QQ if p == 0 else GF(p)
    M = SparseMatrix.from_dense(rows, F)
    b = M.apply({j: F(v) for j, v in enumerate(x[: M.ncols]) if F(v)})
    z = solve(M, b)
    assert z is not None
    assert M.apply(z) == b


def test_solve_inconsistent():
    M = SparseMatrix.from_dense([[1, 0], [1, 0]], QQ)
    assert solve(M, {0: 1}) is None
    assert solve(M, {}) == {}
