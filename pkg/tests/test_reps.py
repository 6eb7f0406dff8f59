from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sdhall.quiver import a2_quiver, jordan_quiver, loop_quiver, loop_to_real_quiver
from sdhall.reps import Budget, RepCategory, ResourceError, gl_product_order


@pytest.fixture(scope="module")
def jordan2():
    return RepCategory(jordan_quiver(), 2)


def _j2(R):
    return R.rep((2,), [[[0, 1], [0, 0]]])


def test_hom_ext_dims(jordan2):
    R = jordan2
    S = R.simple(1)
    J2 = _j2(R)
    assert R.hom_dim(J2, J2) == 2
    assert R.hom_dim(S, S) == 1 and R.ext1_dim(S, S) == 1
    assert R.hom_dim(S, J2) == 1 and R.hom_dim(J2, S) == 1


@pytest.mark.parametrize("dims, mats, order", [
    ((1,), [[[0]]], 1),
    ((2,), [[[0, 1], [0, 0]]], 2),
    ((2,), [[[0, 0], [0, 0]]], 6),
])
def test_aut_orders_q2(jordan2, dims, mats, order):
    assert jordan2.aut_order(jordan2.rep(dims, mats)) == order


@pytest.mark.parametrize("q, dim, count", [(2, 1, 2), (2, 2, 6), (3, 1, 3), (3, 2, 12), (3, 3, 39)])
def test_jordan_class_counts(q, dim, count):
    assert len(RepCategory(jordan_quiver(), q).enumerate_reps((dim,))) == count


@pytest.mark.parametrize("q, dim, count", [(2, 1, 1), (2, 2, 2), (2, 3, 3), (3, 3, 3)])
def test_nilpotent_jordan_counts_are_partitions(q, dim, count):
    assert len(RepCategory(jordan_quiver(), q).enumerate_reps((dim,), nilpotent_only=True)) == count


def test_two_loop_nilpotent_dim2():
    R = RepCategory(loop_quiver(2), 2)
    cl = R.enumerate_reps((2,), nilpotent_only=True)
    assert len(cl) == 4
    assert not R.rep((1,), [[[1]], [[1]]]).is_nilpotent()


def test_hall_numbers(jordan2):
    R = jordan2
    S = R.simple(1)
    assert R.hall_number(S, S, S.power(2)) == 3
    assert R.hall_number(S, S, _j2(R)) == 1
    assert R.hall_number(S, S, R.simple(1, (1,)).power(2)) == 0


def test_riedtmann_peng_small(jordan2):
    R = jordan2
    S = R.simple(1)
    for Z in (S.power(2), _j2(R)):
        assert R.ext_count(S, S, Z) == R.ext_count_enum(S, S, Z)
    # |Ext(S,S)_{S+S}|/|Hom| = 3 * 1 * 1 / 6, |Ext(S,S)_{J2}|/|Hom| = 1 * 1 * 1 / 2
    assert R.ext_count(S, S, S.power(2)) == Fraction(1, 2)
    assert R.ext_count(S, S, _j2(R)) == Fraction(1, 2)


@pytest.mark.parametrize("Q, q", [(jordan_quiver(), 2), (jordan_quiver(), 3), (loop_to_real_quiver(), 2), (a2_quiver(), 3)])
def test_map_profile_matches_scan(Q, q):
    R = RepCategory(Q, q)
    cl = R.enumerate_up_to(2, nilpotent_only=True)
    for B in cl:
        for A in cl:
            assert R.map_profile(B, A) == R.map_profile_enum(B, A)
            assert sum(R.map_profile(B, A).values()) == q ** R.hom_dim(B, A)


def test_elementary_divisor_fast_path_agrees_with_search():
    R = RepCategory(jordan_quiver(), 3)
    for c in R.enumerate_reps((2,)):
        for d in R.enumerate_reps((2,)):
            assert (c == d) == R.is_isomorphic(c.rep, d.rep)


def test_change_basis_is_isomorphic():
    R = RepCategory(loop_to_real_quiver(), 2)
    M = R.rep((2, 1), [[[0, 1], [0, 0]], [[1, 1]]])
    T = [np.array([[1, 1], [0, 1]]), np.array([[1]])]
    assert R.classify(M) == R.classify(M.change_basis(T))


def test_budget_guard():
    R = RepCategory(loop_quiver(2), 3, Budget(max_tuples=10))
    with pytest.raises(ResourceError):
        R.enumerate_reps((2,))


def test_gl_order():
    assert gl_product_order((2,), 2) == 6
    assert gl_product_order((2, 1), 3) == 48 * 2


jordan_mats = st.lists(st.integers(0, 1), min_size=4, max_size=4)


@given(jordan_mats, jordan_mats)
def test_hom_dim_additive_q2(a, b):
    R = RepCategory(jordan_quiver(), 2)
    M = R.rep((2,), [np.array(a).reshape(2, 2)])
    N = R.rep((2,), [np.array(b).reshape(2, 2)])
    S = R.simple(1)
    assert R.hom_dim(M.direct_sum(S), N) == R.hom_dim(M, N) + R.hom_dim(S, N)
    # Euler form depends only on dimension vectors
    assert R.hom_dim(M, N) - R.ext1_dim(M, N) == R.euler(M.dims, N.dims)
