import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from mapgerms import FieldSpec, GermMap, JetRing, UnfoldingMap
from mapgerms.errors import Refusal
from mapgerms.tangent import (derivations, finiteness_certificate, t1, ta_vs_tk_check,
                              tangent_space, tjurina)
from oracle import tjurina_oracle

Q, F3, F5 = FieldSpec(0), FieldSpec(3), FieldSpec(5)


def test_derivations_free():
    R = JetRing(Q, ["x", "y"], D=4)
    d = derivations(R, -1)
    assert d.free and len(d) == 2 * 15
    R1 = JetRing(Q, ["x"], D=5)
    lvl = derivations(R1, 1)
    assert sorted(c[0].order() for c in lvl.generators) == [2, 3, 4, 5]


def test_derivations_quotient():
    R = JetRing(Q, ["x", "y"], D=4, relations=[{(1, 1): 1}])
    d = derivations(R, -1)
    amb_vecs = [tuple(c.constant_term() for c in g) for g in d.generators]
    assert all(v == (0, 0) for v in amb_vecs)
    from mapgerms.linsub import Ambient, span
    amb = Ambient(R, 2)
    S = span(d.generators, amb)
    x, y, z = R.var("x"), R.var("y"), R.zero()
    assert S.contains(amb.vec((x, z))) and S.contains(amb.vec((z, y)))
    assert not S.contains(amb.vec((R.one(), z)))


def test_tangent_examples():
    R = JetRing(Q, ["x"], D=6)
    x = R.var("x")
    TR = tangent_space(GermMap(R, [x ** 3]), "R", reliable=True)
    assert [TR.ambient.coord_str(c) for c in TR.missing()] == ["1", "x"]
    R3 = JetRing(F3, ["x"], D=6)
    f3 = GermMap(R3, [R3.var("x") ** 3])
    assert tangent_space(f3, "R", reliable=True).rank == 0
    TK = tangent_space(f3, "K", reliable=True)
    assert [TK.ambient.coord_str(c) for c in TK.missing()] == ["1", "x", "x^2"]
    assert tangent_space(GermMap(R, [x ** 2]), "A", reliable=True).is_full()


@pytest.mark.parametrize("k", range(1, 7))
def test_t1_ak(k):
    R = JetRing(Q, ["x"], D=8)
    q = t1(GermMap(R, [R.var("x") ** (k + 1)]), "K")
    assert q.dimension == k and q.certified
    assert q.cobasis_str() == ["1"] + ["x" if i == 1 else "x^%d" % i for i in range(1, k)]


def test_t1_identity_and_certificate():
    R = JetRing(F5, ["x", "y"], D=5)
    ident = GermMap(R, [R.var("x"), R.var("y")])
    assert t1(ident, "K").dimension == 0
    assert tjurina(ident) == (0, True)
    R6 = JetRing(Q, ["x", "y"], D=6)
    x, y = R6.var("x"), R6.var("y")
    assert finiteness_certificate(GermMap(R6, [x ** 3 + y ** 3]), "K") == 3
    assert finiteness_certificate(GermMap(JetRing(Q, ["x"], D=6), [JetRing(Q, ["x"], D=6).var("x") ** 3]), "K") == 2
    with pytest.raises(Refusal):
        finiteness_certificate(GermMap(R6, [x ** 3]), "A")


def test_zero_map_has_no_certificate():
    R = JetRing(Q, ["x"], D=6)
    assert finiteness_certificate(GermMap(R, [R.zero()]), "K") is None


def test_tjurina_char3():
    R = JetRing(F3, ["x"], D=6)
    assert tjurina(GermMap(R, [R.var("x") ** 3])) == (3, True)


def test_ta_vs_tk_examples():
    R = JetRing(Q, ["x"], D=8)
    x = R.var("x")
    assert ta_vs_tk_check(GermMap(R, [x ** 3]))
    assert ta_vs_tk_check(GermMap(R, [x ** 2]))
    R2 = JetRing(Q, ["x", "u"], D=8)
    x, u = R2.var("x"), R2.var("u")
    assert ta_vs_tk_check(GermMap(R2, [x ** 3 + u * x, u]))


def test_unfolding_tangent_space_contains_constant_part():
    R = JetRing(Q, ["x"], ["t"], D=6, T=6)
    F = UnfoldingMap.from_polys(R, [{(3, 0): 1, (1, 1): 1}])
    S = tangent_space(F, "R", reliable=True)
    assert S.contains(S.ambient.vec(3 * R.var("x") ** 2 + R.var("t")))


_X, _Y = sp.symbols("x y")


@st.composite
def _poly2(draw):
    # x^a + y^b plus a few higher terms: always isolated, tau finite
    a, b = draw(st.integers(2, 4)), draw(st.integers(2, 4))
    extra = draw(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2)), max_size=3))
    terms = {(a, 0): 1, (0, b): 1}
    for i, j, c in extra:
        if i + j >= max(a, b) + 1 and c:
            terms[(i, j)] = terms.get((i, j), 0) + c
    return {e: c for e, c in terms.items() if c}


@settings(max_examples=25, deadline=None)
@given(_poly2(), st.sampled_from([0, 5, 7]))
def test_tjurina_matches_dense_oracle(poly, p):
    fld = FieldSpec(p)
    R = JetRing(fld, ["x", "y"], D=9)
    f = GermMap.from_polys(R, [poly])
    if f[0].is_zero():
        return
    tau, cert = tjurina(f)
    expr = sum(c * _X ** i * _Y ** j for (i, j), c in poly.items())
    if cert:
        assert tau == tjurina_oracle(expr, [_X, _Y], R.D, p)
