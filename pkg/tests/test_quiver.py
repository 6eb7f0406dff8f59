import pytest
from hypothesis import given, strategies as st

from sdhall.quiver import (
    BorcherdsCartan, Quiver, QuiverError, a2_quiver, cartan_from_quiver, euler_form, jordan_quiver,
    loop_quiver, loop_to_real_quiver, parse_quiver, sym_form,
)


@pytest.mark.parametrize("Q, entries", [
    (jordan_quiver(), ((0,),)),
    (loop_quiver(2), ((-2,),)),
    (loop_quiver(0), ((2,),)),
    (a2_quiver(), ((2, -1), (-1, 2))),
    (loop_to_real_quiver(), ((0, -1), (-1, 2))),
])
def test_cartan_from_quiver(Q, entries):
    assert cartan_from_quiver(Q).entries == entries


def test_vertex_classes():
    A = cartan_from_quiver(loop_to_real_quiver(), lmax=3)
    assert A.real == (2,) and A.imaginary == (1,) and A.isotropic == (1,)
    assert A.index_set() == [(1, 1), (1, 2), (1, 3), (2, 1)]
    assert A.half_diag(1) == 0 and A.half_diag(2) == 1


@pytest.mark.parametrize("Q", [jordan_quiver(), loop_quiver(2), a2_quiver(), loop_to_real_quiver()])
def test_simple_pairing_is_cartan(Q):
    A = cartan_from_quiver(Q)
    for i in Q.vertices:
        for j in Q.vertices:
            assert sym_form(Q, Q.unit(i), Q.unit(j)) == A.a(i, j)


vec2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@given(vec2, vec2, vec2)
def test_euler_bilinear(d, e, f):
    Q = loop_to_real_quiver()
    de = tuple(x + y for x, y in zip(d, e))
    assert euler_form(Q, de, f) == euler_form(Q, d, f) + euler_form(Q, e, f)
    assert sym_form(Q, d, e) == sym_form(Q, e, d)


@pytest.mark.parametrize("entries", [((1,),), ((2, 1), (1, 2)), ((2, -1), (-2, 2)), ((2, 0),)])
def test_invalid_cartan(entries):
    with pytest.raises(QuiverError):
        BorcherdsCartan(tuple(range(len(entries))), entries)


def test_parse_roundtrip():
    Q = parse_quiver("# comment\nvertices: 1 2\narrow: 1 1  # loop\narrow: 1 2\n")
    assert Q == loop_to_real_quiver()


@pytest.mark.parametrize("text, fragment", [
    ("vertices: 1\narrow 1 1\n", "line 2"),
    ("vertices: 1\narrow: 1 2\n", "endpoint"),
    ("arrow: 1 1\n", "no 'vertices:'"),
    ("vertices: 1\narrow: 1\n", "line 2"),
    ("vertices: a\n", "line 1"),
    ("vertices: 1 1\n", "duplicate"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(QuiverError, match=fragment):
        parse_quiver(text)


def test_quiver_helpers():
    Q = Quiver((1, 2), ((1, 1), (1, 1), (1, 2)))
    assert Q.loops(1) == 2 and Q.loops(2) == 0
    assert Q.n_arrows(1, 2) == 1 and Q.loop_arrows(1) == [0, 1]
