"""Random unipotent group elements and the germ catalog used by the
property and acceptance tests."""

import random

from mapgerms import FieldSpec, GermMap, JetRing, UnfoldingMap, jet_substitute

Q, F5 = FieldSpec(0), FieldSpec(5)

# K-finite germs: (field, source vars, polys over the vars)
CATALOG = [
    (Q, ("x",), [{(2,): 1}]),
    (Q, ("x",), [{(3,): 1}]),
    (Q, ("x",), [{(4,): 1, (5,): 2}]),
    (Q, ("x", "y"), [{(3, 0): 1, (0, 3): 1}]),
    (Q, ("x", "y"), [{(3, 0): 1, (0, 4): 1}]),
    (Q, ("x", "y"), [{(2, 1): 1, (0, 3): -1}]),
    (Q, ("x", "y"), [{(2, 0): 1, (0, 2): 1}]),
    (Q, ("x", "u"), [{(3, 0): 1, (1, 1): 1}, {(0, 1): 1}]),
    (Q, ("x", "y"), [{(2, 0): 1}, {(0, 3): 1, (1, 1): 1}]),
    (F5, ("x",), [{(3,): 1}]),
    (F5, ("x",), [{(4,): 1}]),
    (F5, ("x", "y"), [{(3, 0): 1, (0, 3): 1}]),
    (F5, ("x", "y"), [{(2, 0): 1, (0, 4): 1, (1, 3): 1}]),
]


def catalog_germ(entry, D=7):
    fld, xs, polys = entry
    return GermMap.from_polys(JetRing(fld, xs, D=D), polys)


def _rand_c(rng, fld):
    c = rng.randint(-3, 3)
    return fld(c)


def random_poly(ring, rng, xmin=1, xmax=2, tmin=0, tmax=0, density=0.6):
    """Random jet with x-degree in [xmin, xmax], t-degree in [tmin, tmax]."""
    terms = {}
    for m in ring.standard:
        if xmin <= ring.xdeg[m] <= xmax and tmin <= ring.tdeg[m] <= tmax and rng.random() < density:
            c = _rand_c(rng, ring.field)
            if c:
                terms[m] = c
    return ring.jet(terms)


def random_source_change(ring, rng, with_t=False):
    """x_i -> x_i + (m_x^2 terms) [+ t * (m_x terms)]: origin-preserving, unit linear part."""
    out = {}
    T = ring.T if ring.tvars else 0
    for v in ring.xvars:
        img = ring.var(v) + random_poly(ring, rng, 2, 3)
        if with_t and T:
            img = img + random_poly(ring, rng, 1, 2, 1, min(T, 2), density=0.4)
        out[v] = img
    return out


def random_unit(ring, rng, with_t=False):
    u = ring.one() + random_poly(ring, rng, 1, 2)
    if with_t and ring.tvars:
        u = u + random_poly(ring, rng, 0, 2, 1, min(ring.T, 2), density=0.4)
    return u


def act(comps, ring, rng, group, with_t=False):
    """Apply a random unipotent element of R or K (source change, then unit)."""
    sub = random_source_change(ring, rng, with_t)
    out = [jet_substitute(c, sub) for c in comps]
    if group == "K":
        out = [random_unit(ring, rng, with_t) * c for c in out]
    return out


def constant_family(entry, D, T, tv="t"):
    fld, xs, polys = entry
    R = JetRing(fld, xs, (tv,), D, T)
    return UnfoldingMap.from_polys(R, [{e + (0,): c for e, c in pp.items()} for pp in polys])


def exact_family(entry, rng, group, D, T, perturb=False):
    """(g_t . (f_o + perturbation), t) with a polynomial group element applied
    exactly (computed in a ring big enough to hold every term)."""
    fld, xs, polys = entry
    big = JetRing(fld, xs, ("t",), 24, 12)
    comps = [big.jet({e + (0,): c for e, c in pp.items()}) for pp in polys]
    if perturb:
        comps = [c + random_poly(big, rng, 0, 2, 1, 1, density=0.5) for c in comps]
    sub = {v: big.var(v) + random_poly(big, rng, 1, 2, 1, 2, density=0.4) for v in xs}
    comps = [jet_substitute(c, sub) for c in comps]
    if group == "K":
        comps = [(big.one() + random_poly(big, rng, 0, 1, 1, 1, density=0.5)) * c for c in comps]
    polys_t = [{big.exps[m]: c for m, c in c_.terms.items()} for c_ in comps]
    R = JetRing(fld, xs, ("t",), D, T)
    return UnfoldingMap.from_polys(R, polys_t)
