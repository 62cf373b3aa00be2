from mapgerms import FieldSpec, GermMap, JetRing
from mapgerms.linsub import (Ambient, Ideal, quotient, span, subspace_multiply,
                             subspace_sum, zero_subspace)
from mapgerms.tangent import tangent_space

Q, F5 = FieldSpec(0), FieldSpec(5)


def _ideal_space(R, gens, amb):
    return Ideal(R, gens).subspace(amb)


def test_span_examples():
    R = JetRing(Q, ["x"], D=6)
    x = R.var("x")
    amb = Ambient(R, 2)
    e1 = (x, R.zero())
    assert span([e1, e1], amb).rank == 1
    assert span([], amb).rank == 0
    a1 = Ambient(R, 1)
    assert span([(2 * x + x ** 2,), (4 * x + 2 * x ** 2,)], a1).rank == 1


def test_member_examples():
    R = JetRing(Q, ["x"], D=5)
    x = R.var("x")
    amb = Ambient(R, 1)
    S = _ideal_space(R, [x ** 2], amb)
    assert S.member(amb.vec(x ** 3)).ok
    m = S.member(amb.vec(x))
    assert not m.ok and amb.vec_str(m.residue) == "x"
    R5 = JetRing(F5, ["x"], D=6)
    x5 = R5.var("x")
    TR = tangent_space(GermMap(R5, [x5 ** 3]), "R", reliable=True)
    assert not TR.contains(TR.ambient.vec(x5))


def test_member_witness_reconstructs():
    R = JetRing(Q, ["x", "y"], D=5)
    x, y = R.var("x"), R.var("y")
    amb = Ambient(R, 1)
    gens = [(x ** 2 + y,), (x * y,), (y ** 2,)]
    S = span(gens, amb, track=True)
    v = amb.vec(3 * (x ** 2 + y) - 2 * x * y)
    m = S.member(v)
    assert m.ok
    tot = {}
    for g, c in m.witness.items():
        for k, a in amb.vec(gens[g]).items():
            tot[k] = tot.get(k, 0) + c * a
    assert {k: a for k, a in tot.items() if a} == v


def test_quotient_examples():
    R = JetRing(Q, ["x"], D=6)
    x = R.var("x")
    amb = Ambient(R, 1)
    q = quotient(_ideal_space(R, [x ** 2], amb))
    assert q.dimension == 2 and q.cobasis_str() == ["1", "x"]
    full = span(amb.full_vectors(), amb)
    assert quotient(full).dimension == 0
    R2 = JetRing(Q, ["x", "y"], D=6)
    x, y = R2.var("x"), R2.var("y")
    TK = tangent_space(GermMap(R2, [x ** 3 + y ** 3]), "K", reliable=True)
    q = quotient(TK)
    assert q.dimension == 4 and q.cobasis_str() == ["1", "x", "y", "x*y"]


def test_sum_and_multiply():
    R = JetRing(Q, ["x"], D=6)
    x = R.var("x")
    amb = Ambient(R, 1)
    S2, S3 = _ideal_space(R, [x ** 2], amb), _ideal_space(R, [x ** 3], amb)
    assert subspace_sum(S2, S3) == S2
    assert subspace_multiply(S2, Ideal(R, [x])) == S3
    assert subspace_multiply(S2, _ideal_space(R, [x], amb)) == S3
    assert subspace_sum(zero_subspace(amb), S3) == S3


def test_m_a_TR():
    R = JetRing(Q, ["x"], D=8)
    x = R.var("x")
    amb = Ambient(R, 1, xmax=7)
    TR = tangent_space(GermMap(R, [x ** 3]), "R", reliable=True)
    a = Ideal(R, [x ** 2])
    got = subspace_multiply(subspace_multiply(TR, a), Ideal.max_power(R, 1))
    assert got == _ideal_space(R, [x ** 5], amb)
