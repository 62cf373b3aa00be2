import pytest

from mapgerms import FieldSpec, GermMap, JetRing, UnfoldingMap

Q = FieldSpec(0)


def germ(field, xs, polys, D=8, relations=()):
    """GermMap from {exps: coeff} dicts over xs."""
    R = JetRing(field, xs, D=D, relations=relations)
    return GermMap.from_polys(R, polys)


def unfolding(field, xs, ts, polys, D=8, T=None):
    R = JetRing(field, xs, ts, D, T if T is not None else 2 * D)
    return UnfoldingMap.from_polys(R, polys)


@pytest.fixture
def Qx():
    return JetRing(Q, ["x"], D=8)
