import pytest

from sdhall.presentations import (
    Generator, PhiMap, PresentationError, PsiMap, QAlgebraElement, ef_relation, perturb_relation,
    phi_image, phi_independence_rank, psi_image, relations_qbb, relations_qkm, validate_lambda_table,
    verify_relation,
)
from sdhall.quiver import a2_quiver, cartan_from_quiver, jordan_quiver, loop_quiver, loop_to_real_quiver
from sdhall.scalars import LaurentPoly, RationalFunction, q_integer, tau
from sdhall.sdh import SDHContext


def e(i, l=1):
    return QAlgebraElement.word(Generator("e", i, l))


def f(i, l=1):
    return QAlgebraElement.word(Generator("f", i, l))


def test_ef_relation_k_l_1_expansion():
    A = cartan_from_quiver(jordan_quiver())
    rel = ef_relation(A, 1, 1, 1)
    K = QAlgebraElement.word(Generator("K", 1))
    Kp = QAlgebraElement.word(Generator("Kp", 1))
    # e f - f e = tau_1 (K - K')
    assert rel.lhs - rel.rhs == e(1) * f(1) - f(1) * e(1) + (Kp - K) * tau(1)
    assert tau(1) == RationalFunction.const(1) / (1 - RationalFunction(LaurentPoly.monomial(2)))


def test_serre_a2_expansion():
    A = cartan_from_quiver(a2_quiver())
    rel = next(r for r in relations_qbb(A, 1) if r.id == "serre-e" and r.params["i"] == 1)
    two = RationalFunction(q_integer(2))
    expected = e(1) * e(1) * e(2) - e(1) * e(2) * e(1) * two + e(2) * e(1) * e(1)
    assert rel.lhs == expected and not rel.rhs.terms


def test_weight_relation_level_scaling():
    A = cartan_from_quiver(loop_to_real_quiver())
    rel = next(r for r in relations_qbb(A, 2) if r.id == "K-e" and r.params == {"i": 2, "j": 1, "l": 2})
    assert rel.rhs.terms == {(Generator("e", 1, 2), Generator("K", 2)): RationalFunction.v_power(-2)}


def test_qbb_relation_families():
    A = cartan_from_quiver(loop_to_real_quiver(), 2)
    ids = {r.id for r in relations_qbb(A, 2)}
    assert {"K-inverse", "K-K", "K-e", "Kp-f", "ef-commute", "ef-bozec", "serre-e", "serre-f"} <= ids
    real_ef = [r for r in relations_qbb(A, 2) if r.id == "ef-bozec" and r.params["i"] == 2]
    assert len(real_ef) == 1 and real_ef[0].note


def test_qkm_relations():
    A = cartan_from_quiver(jordan_quiver())
    rels = relations_qkm(A, {1: 2})
    diag = [r for r in rels if r.id == "EF" and r.params["k"] == r.params["l"]]
    off = [r for r in rels if r.id == "EF" and r.params["k"] != r.params["l"]]
    assert len(diag) == 2 and len(off) == 2 and all(not r.rhs.terms for r in off)
    with pytest.raises(PresentationError):
        relations_qkm(cartan_from_quiver(a2_quiver()), {1: 2})


def test_qkm_serre_commuting_case():
    Q = type(a2_quiver())((1, 2), ())
    A = cartan_from_quiver(Q)
    rel = next(r for r in relations_qkm(A, {}) if r.id == "serre-E" and r.params["i"] == 1)
    E1 = QAlgebraElement.word(Generator("E", 1, 1))
    E2 = QAlgebraElement.word(Generator("E", 2, 1))
    assert rel.lhs == E1 * E2 - E2 * E1


def test_phi_generator_images():
    ctx = SDHContext(jordan_quiver(), 3)
    S = ctx.reps.simple(1)
    assert phi_image([Generator("K", 1)], ctx) == ctx.k(1) * 3
    assert phi_image([Generator("e", 1, 1)], ctx) == ctx.c(S) * ctx.v_power(1) / 2
    assert phi_image([Generator("K", 1), Generator("Kinv", 1)], ctx) == ctx.one()
    assert phi_image([Generator("e", 1, 2)], ctx) == ctx.c(S.power(2)) * ctx.v_power(4) / 48


@pytest.mark.parametrize("Q", [jordan_quiver(), loop_quiver(2), loop_to_real_quiver()], ids=["jordan", "two-loop", "loop-to-real"])
def test_phi_relations_q2(Q):
    ctx = SDHContext(Q, 2)
    phi = PhiMap(ctx)
    for rel in relations_qbb(cartan_from_quiver(Q, 2), 2):
        assert verify_relation(rel, phi).ok, rel.describe()


def test_phi_serre_a2_q3():
    ctx = SDHContext(a2_quiver(), 3)
    phi = PhiMap(ctx)
    for rel in relations_qbb(cartan_from_quiver(a2_quiver()), 1):
        assert verify_relation(rel, phi).ok


@pytest.mark.parametrize("q", [2, 3])
def test_psi_relations_jordan(q):
    ctx = SDHContext(jordan_quiver(), q, "modified")
    table = {1: [(0,), (1,)]}
    psi = PsiMap(ctx, table)
    for rel in relations_qkm(cartan_from_quiver(jordan_quiver()), psi.charge):
        assert verify_relation(rel, psi).ok


def test_psi_diagonal_commutator():
    q = 3
    ctx = SDHContext(jordan_quiver(), q, "modified")
    table = {1: [(0,), (2,)]}
    S = ctx.reps.simple(1, (2,))
    assert ctx.cstar(S) * ctx.c(S) == ctx.basis(S, S) + ctx.k(1) * (q - 1)
    E = psi_image([Generator("E", 1, 2)], ctx, table)
    F = psi_image([Generator("F", 1, 2)], ctx, table)
    vv = ctx.v_power(1) - ctx.v_power(-1)
    assert E * F - F * E == (ctx.k(1) - ctx.kstar(1)) / vv


def test_psi_lambda_permutation_outcome_invariant():
    ctx = SDHContext(jordan_quiver(), 3, "modified")
    A = cartan_from_quiver(jordan_quiver())
    for table in ({1: [(0,), (1,)]}, {1: [(1,), (0,)]}, {1: [(2,), (0,)]}):
        psi = PsiMap(ctx, table)
        assert all(verify_relation(r, psi).ok for r in relations_qkm(A, psi.charge))


@pytest.mark.parametrize("table, msg", [
    ({1: [(0,), (0,)]}, "duplicate"),
    ({1: [(0, 1)]}, "scalars"),
    ({1: [(0,), (1,), (2,)]}, "exceeds"),
    ({1: [(5,)]}, "lie in"),
])
def test_lambda_table_validation(table, msg):
    with pytest.raises(PresentationError, match=msg):
        validate_lambda_table(jordan_quiver(), 2, table)


def test_modes_enforced():
    with pytest.raises(PresentationError):
        PhiMap(SDHContext(jordan_quiver(), 2, "modified"))
    with pytest.raises(PresentationError):
        PsiMap(SDHContext(jordan_quiver(), 2), {1: [(0,)]})


def test_negative_controls():
    ctx = SDHContext(jordan_quiver(), 2)
    phi = PhiMap(ctx)
    A = cartan_from_quiver(jordan_quiver(), 2)
    for rel in relations_qbb(A, 2):
        if rel.id == "ef-bozec":
            for idx in range(len(rel.lhs.terms)):
                res = verify_relation(perturb_relation(rel, idx), phi)
                assert res.status == "nonzero" and not res.residual.is_zero()


def test_independence_smoke():
    for Q in (jordan_quiver(), loop_quiver(2)):
        assert phi_independence_rank(SDHContext(Q, 2), 1) == 3


def test_generator_validation():
    with pytest.raises(PresentationError):
        Generator("e", 1, 0)
    with pytest.raises(PresentationError):
        Generator("X", 1)
