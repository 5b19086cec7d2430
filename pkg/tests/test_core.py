from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polycomplex.core import (GF, QQ, ContractError, Field, GradedMap, GradedSpace, compose,
                              direct_sum, identity, image_of, inverse_of, kernel_of, rank_of,
                              shift, solve_of)
from polycomplex.core.maps import MapSpace, solve_commuting

small = st.integers(min_value=-4, max_value=4)


def mats(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_field_parse_and_str():
    assert Field.parse("q") == QQ
    assert Field.parse("p:7") == Field(7)
    assert str(GF) == "p:32003"
    with pytest.raises(ContractError):
        Field.parse("p:8")
    with pytest.raises(ContractError):
        Field.parse("reals")


def test_scalars():
    F = Field(7)
    assert F.scalar(-1) == 6
    assert F.inv(3) == 5
    assert F.scalar(Fraction(1, 2)) == 4
    assert QQ.format_scalar(Fraction(-3, 4)) == "-3/4"
    assert QQ.parse_scalar("-3/4") == Fraction(-3, 4)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@settings(max_examples=60, deadline=None)
@given(mats(3, 4), st.sampled_from([GF, QQ, Field(5)]))
def test_rank_nullity(data, F):
    A = F.array(data, shape=(3, 4))
    K = kernel_of(F, A)
    assert rank_of(F, A) + K.shape[1] == 4
    assert F.is_zero(F.matmul(A, K))
    assert rank_of(F, K) == K.shape[1]


@settings(max_examples=60, deadline=None)
@given(mats(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve_roundtrip(data, x):
    F = QQ
    A = F.array(data, shape=(3, 3))
    b = F.matmul(A, F.array(x, shape=(3, 1)))
    y = solve_of(F, A, b)
    assert y is not None and F.equal(F.matmul(A, y), b)


def test_solve_inconsistent():
    F = GF
    A = F.array([[1, 0], [0, 0]], shape=(2, 2))
    assert solve_of(F, A, F.array([[0], [1]], shape=(2, 1))) is None


@settings(max_examples=40, deadline=None)
@given(mats(3, 3))
def test_inverse(data):
    F = GF
    A = F.array(data, shape=(3, 3))
    inv = inverse_of(F, A)
    if rank_of(F, A) == 3:
        assert F.equal(F.matmul(A, inv), F.eye(3))
    else:
        assert inv is None


def test_image_spans_columns():
    F = QQ
    A = F.array([[1, 2, 3], [2, 4, 6]], shape=(2, 3))
    assert image_of(F, A).shape[1] == 1


def test_graded_space_shift_moves_up():
    V = GradedSpace(2, {(0, 0): 2})
    assert V.shift((1, -1)).dims == {(1, -1): 2}
    assert V.shift((1, -1)).dim((0, 0)) == 0


def test_graded_map_checks_shapes():
    V = GradedSpace(1, {(0,): 2, (1,): 1})
    with pytest.raises(ContractError):
        GradedMap(GF, V, V, (1,), {(0,): GF.eye(2)})


def test_compose_and_identity():
    F = GF
    V = GradedSpace(1, {(0,): 2, (1,): 2})
    f = GradedMap(F, V, V, (1,), {(0,): F.array([[1, 2], [3, 4]], shape=(2, 2))})
    assert compose(f, identity(F, V)) == f
    assert compose(identity(F, V), f) == f
    assert compose(f, f).is_zero()


def test_shift_and_direct_sum():
    F = GF
    V = GradedSpace(1, {(0,): 1, (1,): 1})
    f = GradedMap(F, V, V, (1,), {(0,): F.eye(1)})
    g = shift(f, (2,))
    assert g.source.dims == {(2,): 1, (3,): 1}
    s = direct_sum(f, f)
    assert s.block((0,)).shape == (2, 2)


def test_mapspace_solves_commuting_squares():
    # degree 0 maps of k[x]/x^2 commuting with x are the scalars
    F = GF
    V = GradedSpace(1, {(0,): 1, (1,): 1})
    x = GradedMap(F, V, V, (1,), {(0,): F.eye(1)})
    sols = solve_commuting(MapSpace(F, V, V, (0,)), [(x, x, 1)])
    assert len(sols) == 1
    sols = solve_commuting(MapSpace(F, V, V, (1,)), [(x, x, 1)])
    assert len(sols) == 1
    # anticommuting with x: only diag(1, -1) up to scale
    sols = solve_commuting(MapSpace(F, V, V, (0,)), [(x, x, -1)])
    assert len(sols) == 1
    a, b = int(sols[0][(0,)][0, 0]), int(sols[0][(1,)][0, 0])
    assert (a + b) % F.p == 0 and a != 0


def test_matmul_large_values_stay_exact():
    F = GF
    A = F.array(np.full((50, 50), F.p - 1), shape=(50, 50))
    B = F.matmul(A, A)
    assert int(B[0, 0]) == (50 * (F.p - 1) ** 2) % F.p
