import pytest

from mapgerms import FieldSpec, JetRing
from mapgerms.errors import Refusal
from mapgerms.linsub import Ideal
from mapgerms.matheryau import (ConditionSpec, algebra_fingerprint, condition_check,
                                corollary_trivial_check, ideal_from_token)
from mapgerms.tangent import tangent_space
from conftest import germ, unfolding

Q, F2 = FieldSpec(0), FieldSpec(2)


def _x3():
    f = germ(Q, ["x"], [{(3,): 1}])
    return f, Ideal(f.ring, [f.ring.var("x") ** 2])


def test_condition_x3():
    f, a = _x3()
    assert condition_check(f, ConditionSpec("K", a)).holds
    assert condition_check(f, ConditionSpec("R", a)).holds


def test_condition_char2_pair_golden():
    for D in (12, 14):
        f = germ(F2, ["x", "y"], [{(3, 0): 1, (0, 7): 1}], D=D)
        r = condition_check(f, ConditionSpec("K", ideal_from_token(f.ring, "m^3")))
        assert not r.holds and r.failing == "x*y^6" and r.exact


def test_fingerprint_x3():
    f, a = _x3()
    q = algebra_fingerprint(f, ConditionSpec("K", a))
    assert q.dimension == 3 and q.hilbert == [1, 1, 1]


def test_fingerprint_submersion():
    f = germ(Q, ["x"], [{(1,): 1}])
    assert algebra_fingerprint(f, ConditionSpec("K", ideal_from_token(f.ring, "R"))).dimension == 0
    assert algebra_fingerprint(f, ConditionSpec("K", ideal_from_token(f.ring, "m"))).dimension == 1


def test_char2_pair_equal_invariants():
    f = germ(F2, ["x", "y"], [{(3, 0): 1, (0, 7): 1}], D=12)
    g = germ(F2, ["x", "y"], [{(3, 0): 1, (0, 7): 1, (2, 2): 1}], D=12)
    assert tangent_space(f, "R", reliable=True) == tangent_space(g, "R", reliable=True)
    m = ideal_from_token(f.ring, "m")
    qa = algebra_fingerprint(f, ConditionSpec("K", m))
    qb = algebra_fingerprint(g, ConditionSpec("K", m))
    assert (qa.dimension, qa.hilbert) == (qb.dimension, qb.hilbert) == (14, [1, 2, 3, 2, 2, 2, 2])


def test_fingerprint_refuses_general_shape():
    f = germ(Q, ["x", "y"], [{(2, 0): 1}, {(0, 2): 1}])
    with pytest.raises(Refusal):
        algebra_fingerprint(f, ConditionSpec("K", ideal_from_token(f.ring, "m")))
    q = algebra_fingerprint(f, ConditionSpec("A", ideal_from_token(f.ring, "m")))
    assert q.dimension == 3      # (x^2, y^2) + m^2 = m^2


def test_constant_comparison():
    assert corollary_trivial_check(unfolding(Q, ["x"], ["t"], [{(3, 0): 1}]), "K")
    assert corollary_trivial_check(unfolding(Q, ["x"], ["t"], [{(3, 0): 1, (3, 1): 1}]), "K")
    assert not corollary_trivial_check(unfolding(Q, ["x"], ["t"], [{(3, 0): 1, (1, 1): 1}]), "K")
    with pytest.raises(Refusal):
        corollary_trivial_check(unfolding(FieldSpec(5), ["x"], ["t"], [{(3, 0): 1, (1, 5): 1}]), "K")
