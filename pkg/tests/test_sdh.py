import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sdhall.complexes import Z2Complex, stalk
from sdhall.quiver import a2_quiver, jordan_quiver, loop_quiver, loop_to_real_quiver
from sdhall.scalars import QuadExt
from sdhall.sdh import SDHContext, mode_select


@pytest.fixture(scope="module")
def jctx():
    return SDHContext(jordan_quiver(), 2)


def test_reduce_stalks(jctx):
    S = jctx.reps.simple(1)
    assert jctx.reduce(stalk(S, "C")) == jctx.c(S)
    assert jctx.reduce(stalk(S, "Cstar")) == jctx.cstar(S)
    assert jctx.reduce(stalk(S, "K")) == jctx.k_weight((1,), None)
    assert jctx.reduce(stalk(S, "Kstar")) == jctx.k_weight(None, (1,))


def test_reduce_loop_complex(jctx):
    R = jctx.reps
    J2 = R.rep((2,), [[[0, 1], [0, 0]]])
    M = Z2Complex(J2, J2, [np.array([[0, 1], [0, 0]])], [np.zeros((2, 2), dtype=np.int64)])
    S = R.simple(1)
    assert jctx.reduce(M) == jctx.basis(S, S, (1,), (0,))


def test_c_times_cstar_same_simple(jctx):
    S = jctx.reps.simple(1)
    prod = jctx.c(S) * jctx.cstar(S)
    assert prod == jctx.basis(S, S) + jctx.kstar(1) * (jctx.q - 1)
    prod2 = jctx.cstar(S) * jctx.c(S)
    assert prod2 == jctx.basis(S, S) + jctx.k(1) * (jctx.q - 1)


def test_c_times_cstar_distinct_vertices():
    ctx = SDHContext(a2_quiver(), 2)
    S1, S2 = ctx.reps.simple(1), ctx.reps.simple(2)
    assert ctx.c(S1) * ctx.cstar(S2) == ctx.basis(S1, S2)
    assert ctx.cstar(S2) * ctx.c(S1) == ctx.basis(S1, S2)


def test_embedding_of_hall_algebra_jordan_q2(jctx):
    # [S]*[S] = 1/2 [S+S] + 1/2 [J2] in the twisted Hall algebra of rep(Q)
    S = jctx.reps.simple(1)
    J2 = jctx.reps.rep((2,), [[[0, 1], [0, 0]]])
    expected = jctx.c(S.power(2)) * Fraction(1, 2) + jctx.c(J2) * Fraction(1, 2)
    assert jctx.c(S) * jctx.c(S) == expected
    assert jctx.cstar(S) * jctx.cstar(S) == jctx.cstar(S.power(2)) * Fraction(1, 2) + jctx.cstar(J2) * Fraction(1, 2)


@pytest.mark.parametrize("Q, q", [(jordan_quiver(), 2), (jordan_quiver(), 3), (loop_to_real_quiver(), 2)])
def test_embedding_property(Q, q):
    ctx = SDHContext(Q, q)
    cl = ctx.reps.enumerate_up_to(2, nilpotent_only=True)
    for X, Y in itertools.product(cl, repeat=2):
        if X.total_dim + Y.total_dim > 3:
            continue
        hall = ctx.rep_hall_product(X, Y)
        want_c = sum((ctx.c(Z) * c for Z, c in hall.items()), ctx.zero_element())
        want_cs = sum((ctx.cstar(Z) * c for Z, c in hall.items()), ctx.zero_element())
        assert ctx.c(X) * ctx.c(Y) == want_c
        assert ctx.cstar(X) * ctx.cstar(Y) == want_cs


def test_weights_group_like(jctx):
    a = jctx.k_weight((1,), (2,))
    b = jctx.k_weight((-1,), (-2,))
    assert a * b == jctx.one()
    assert jctx.k(1) * jctx.kstar(1) == jctx.kstar(1) * jctx.k(1)
    assert jctx.k_weight((0,), (0,)) == jctx.one()


@pytest.mark.parametrize("Q", [a2_quiver(), loop_to_real_quiver()])
def test_weight_commutation_scalar(Q):
    ctx = SDHContext(Q, 3)
    for i, j in itertools.product(Q.vertices, repeat=2):
        Sj = ctx.reps.simple(j)
        a = ctx.sym(Q.unit(i), Q.unit(j))
        assert ctx.k(i) * ctx.c(Sj) == ctx.c(Sj) * ctx.k(i) * ctx.v_power(a)
        assert ctx.kstar(i) * ctx.c(Sj) == ctx.c(Sj) * ctx.kstar(i) * ctx.v_power(-a)
        assert ctx.k(i) * ctx.cstar(Sj) == ctx.cstar(Sj) * ctx.k(i) * ctx.v_power(-a)
        assert ctx.kstar(i) * ctx.cstar(Sj) == ctx.cstar(Sj) * ctx.kstar(i) * ctx.v_power(a)


@pytest.mark.parametrize("Q", [jordan_quiver(), loop_to_real_quiver(), a2_quiver()])
def test_acyclic_commutation_against_complex_products(Q):
    """Eager weight scalars agree with the complex-level Hall product."""
    ctx = SDHContext(Q, 2)
    R = ctx.reps
    simples = [R.simple(v) for v in Q.vertices]
    objs = simples + [simples[0].direct_sum(simples[-1])]
    for X in simples:
        for M in objs:
            for kx in ("K", "Kstar"):
                for km in ("C", "Cstar", "K", "Kstar"):
                    L, N = stalk(X, kx), stalk(M, km)
                    assert ctx.hall_product_cx(L, N) == ctx.reduce(L) * ctx.reduce(N)
                    assert ctx.hall_product_cx(N, L) == ctx.reduce(N) * ctx.reduce(L)


def test_double_bracket(jctx):
    S = jctx.reps.simple(1)
    assert jctx.double_bracket(stalk(S, "C")) == jctx.c(S) / (jctx.q - 1)
    assert jctx.double_bracket_basis(S.power(2), None) == jctx.c(S.power(2)) / 6
    assert jctx.double_bracket_basis() == jctx.one()
    assert jctx.double_bracket(stalk(S.power(2), "C")) == jctx.double_bracket_basis(S.power(2), None)


@pytest.mark.parametrize("Q, q", [(jordan_quiver(), 2), (loop_quiver(2), 2), (loop_to_real_quiver(), 2), (jordan_quiver(), 3)])
def test_count_route_matches_scan(Q, q):
    ctx = SDHContext(Q, q)
    cl = ctx.reps.enumerate_up_to(2, nilpotent_only=True)
    if Q.n > 1:
        cl = [c for c in cl if c.total_dim <= 1]
    for A, B, A2, B2 in itertools.product(cl, repeat=4):
        if A.total_dim + B.total_dim + A2.total_dim + B2.total_dim > 3:
            continue
        count = {k: v for k, v in ctx.stalk_product(A, B, A2, B2, "count").items() if not v.is_zero()}
        assert count == ctx.stalk_product(A, B, A2, B2, "scan")


def test_modes():
    Q = jordan_quiver()
    mod = mode_select(Q, 3, "modified")
    for lam in range(3):
        S = mod.reps.simple(1, (lam,))
        assert mod.reduce(stalk(S, "K")) == mod.k_weight((1,), None)
    nil = mode_select(Q, 3, "nilpotent")
    J2 = nil.reps.rep((2,), [[[0, 1], [0, 0]]])
    assert nil.reduce(stalk(J2, "K")) == nil.k_weight((2,), None)
    with pytest.raises(ValueError):
        nil.c(nil.reps.simple(1, (1,)))
    with pytest.raises(ValueError):
        mode_select(Q, 3, "other")


def test_modes_agree_on_loop_free():
    a = mode_select(a2_quiver(), 2, "nilpotent")
    b = mode_select(a2_quiver(), 2, "modified")
    S1, S2 = a.reps.simple(1), a.reps.simple(2)
    pa = (a.c(S1) * a.cstar(S1) * a.c(S2)).to_records()
    pb = (b.c(b.reps.simple(1)) * b.cstar(b.reps.simple(1)) * b.c(b.reps.simple(2))).to_records()
    assert [r["coeff"] for r in pa] == [r["coeff"] for r in pb]


def test_context_mismatch():
    a, b = SDHContext(jordan_quiver(), 2), SDHContext(jordan_quiver(), 2)
    with pytest.raises(ValueError):
        a.one() * b.one()


def test_linear_rank(jctx):
    S = jctx.reps.simple(1)
    x, y = jctx.c(S), jctx.cstar(S)
    assert jctx.linear_rank([x, y, x + y]) == 2
    assert jctx.linear_rank([x * QuadExt(2, 0, 1), x]) == 1


def test_records_are_sorted_and_exact(jctx):
    S = jctx.reps.simple(1)
    recs = (jctx.c(S) * jctx.cstar(S)).to_records()
    assert recs == (jctx.c(S) * jctx.cstar(S)).to_records()
    assert [r["A"] for r in recs] == ["0", jctx.reps.classify(S).label]
    assert {tuple(r["coeff"]) for r in recs} == {("1", "0", 2)}


_ASSOC_CTX = SDHContext(jordan_quiver(), 2)
_ASSOC_CLASSES = _ASSOC_CTX.reps.enumerate_up_to(2, nilpotent_only=True)
basis_args = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-1, 1), st.integers(-1, 1))


@given(basis_args, basis_args, basis_args)
def test_associativity_hypothesis(a, b, c):
    ctx = _ASSOC_CTX
    cl = _ASSOC_CLASSES

    def el(t):
        return ctx.basis(cl[t[0]], cl[t[1]], (t[2],), (t[3],))

    x, y, z = el(a), el(b), el(c)
    assert (x * y) * z == x * (y * z)


