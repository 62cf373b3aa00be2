"""Tangent spaces T_R, T_L, T_K, T_A (extended and filtered), T^1 quotients,
Nakayama certificates and Tjurina numbers."""

from dataclasses import dataclass
from functools import lru_cache

from .errors import Refusal
from .jets import GermMap, JetRing, UnfoldingMap, jet_partial
from .linsub import Ambient, QuotientData, quotient, span
from .echelon import Echelon


@dataclass(frozen=True)
class GroupSpec:
    group: str = "K"
    level: int = -1

    def __post_init__(self):
        if self.group not in ("R", "K", "A", "L"):
            raise ValueError("group must be one of R, K, A, L")
        if self.level < -1:
            raise ValueError("filtration level must be >= -1")

    def __str__(self):
        return self.group if self.level == -1 else "%s^(%d)" % (self.group, self.level)


def as_spec(spec):
    if isinstance(spec, GroupSpec):
        return spec
    if isinstance(spec, tuple):
        return GroupSpec(*spec)
    return GroupSpec(spec)


# ------------------------------------------------------------ derivations

@dataclass
class DerivationBasis:
    ring: JetRing
    level: int
    generators: list        # n-tuples of jets (coefficients c_i of xi = sum c_i d_i)
    free: bool              # J = 0: generators are exactly x^a d_i
    directions: tuple = None

    def __len__(self):
        return len(self.generators)

    def apply(self, k, g):
        """xi_k(g) for a jet g of the same (or a family) ring."""
        coeffs = self.generators[k]
        ring = g.ring
        out = ring.zero()
        for c, v in zip(coeffs, self.ring.xvars):
            if c.is_zero():
                continue
            if c.ring is not ring:
                c = ring.convert(c)
            out = out + c * jet_partial(g, v)
        return out


def _allowed(ring, m, i, level, zset):
    """x^a d_i has filtration degree >= level w.r.t. I = (z)."""
    e = ring.exps[m]
    zd = sum(e[k] for k in zset)
    return zd - (1 if i in zset else 0) >= level


def _zset(ring, directions):
    if directions is None:
        return frozenset(range(ring.n))
    return frozenset(ring.var_index[v] for v in directions)


def derivations(ring, level=-1, directions=None):
    """Spanning set (jet level) of Der_X^{(level)} for I = m (or I = (directions))."""
    ring = ring.germ_ring()
    zset = _zset(ring, directions)
    xmonos = [m for m in ring.standard if ring.tdeg[m] == 0]
    n = ring.n
    if not ring.has_relations:
        gens = []
        for m in xmonos:
            for i in range(n):
                if _allowed(ring, m, i, level, zset):
                    c = [ring.zero()] * n
                    c[i] = ring.monomial(m)
                    gens.append(tuple(c))
        return DerivationBasis(ring, level, gens, True, directions)
    # J != 0: solve xi(g_a) in J + m^D for the relation generators g_a
    free = JetRing(ring.field, ring.xvars, (), ring.D)
    rels = [free.jet(r) for r in ring.relation_polys]
    dgs = [[ring.convert(jet_partial(g, v)) for g in rels] for v in ring.xvars]
    amb = Ambient(ring, len(rels), xmax=ring.D - 1)
    unknowns = []
    ech = Echelon(ring.field, track=True)
    for m in xmonos:
        mj = ring.monomial(m)
        for i in range(n):
            if not _allowed(ring, m, i, level, zset):
                continue
            unknowns.append((i, m))
            ech.insert(amb.vec(tuple(mj * dg for dg in dgs[i])))
    gens = []
    for combo in ech.kernel:
        c = [dict() for _ in range(n)]
        for u, a in combo.items():
            i, m = unknowns[u]
            c[i][m] = a
        gens.append(tuple(ring.jet(ci) for ci in c))
    return DerivationBasis(ring, level, gens, False, directions)


# ------------------------------------------------------------ tangent spaces

def target_monomials(f, min_deg=0):
    """[(beta, y^beta o f)] for all y-monomials with |beta| >= min_deg whose
    composite survives truncation."""
    comps = list(getattr(f, 'components', f))
    ring = comps[0].ring
    p = len(comps)
    out = []
    layer = {(0,) * p: ring.one()}
    d = 0
    while layer:
        if d >= min_deg:
            out.extend(sorted(layer.items(), key=lambda kv: tuple(-b for b in kv[0])))
        nxt = {}
        for beta, val in layer.items():
            last = max([i for i, b in enumerate(beta) if b] or [0])
            for i in range(last, p):
                nb = list(beta)
                nb[i] += 1
                nb = tuple(nb)
                if nb in nxt:
                    continue
                prod = val * comps[i]
                if not prod.is_zero():
                    nxt[nb] = prod
        layer = nxt
        d += 1
    return out


def reliable_ambient(ring, p):
    """Block of R^p unaffected by the one-degree loss of derivatives."""
    return Ambient(ring, p, xmax=ring.D - 1, tmax=(ring.T - 1 if ring.r else None))


def full_ambient(ring, p):
    return Ambient(ring, p)


def tangent_generators(f, spec, directions=None):
    """Yield (label, p-tuple of jets) spanning T_G f (G per spec)."""
    spec = as_spec(spec)
    comps = tuple(f.components)
    ring = comps[0].ring
    p = len(comps)
    g, j = spec.group, spec.level
    zset = _zset(ring, directions)
    zero = ring.zero()
    out = []
    if g in ("R", "K", "A"):
        if not ring.has_relations:
            parts = [tuple(jet_partial(c, v) for c in comps) for v in ring.xvars]
            for m in ring.standard:
                mj = None
                for i in range(ring.n):
                    if all(c.is_zero() for c in parts[i]):
                        continue
                    if not _allowed(ring, m, i, j, zset):
                        continue
                    if mj is None:
                        mj = ring.monomial(m)
                    out.append((("R", i, m), tuple(mj * c for c in parts[i])))
        else:
            der = derivations(ring, j, directions)
            tmonos = [m for m in ring.standard if ring.xdeg[m] == 0]
            for k in range(len(der)):
                vals = tuple(der.apply(k, c) for c in comps)
                if all(v.is_zero() for v in vals):
                    continue
                for tm in tmonos:
                    tj = ring.monomial(tm)
                    out.append((("Rd", k, tm), tuple(tj * v for v in vals)))
    if g == "K":
        lev = max(j - 1, 0)
        for m in ring.standard:
            e = ring.exps[m]
            if sum(e[k] for k in zset) < lev:
                continue
            mj = ring.monomial(m)
            for k, c in enumerate(comps):
                if c.is_zero():
                    continue
                prod = mj * c
                if prod.is_zero():
                    continue
                for l in range(p):
                    vec = [zero] * p
                    vec[l] = prod
                    out.append((("K", k, l, m), tuple(vec)))
    if g in ("A", "L"):
        tmonos = [m for m in ring.standard if ring.xdeg[m] == 0]
        for beta, val in target_monomials(comps, j + 1):
            for tm in tmonos:
                v = ring.monomial(tm) * val if tm else val
                if v.is_zero():
                    continue
                for l in range(p):
                    vec = [zero] * p
                    vec[l] = v
                    out.append((("L", beta, l, tm), tuple(vec)))
    return out


class _MapKey:
    # hashable wrapper so lru_cache can key on maps
    __slots__ = ("f", "h")

    def __init__(self, f):
        self.f = f
        self.h = hash((id(f.components[0].ring), tuple(f.components)))

    def __hash__(self):
        return self.h

    def __eq__(self, other):
        return (self.f.components[0].ring is other.f.components[0].ring
                and tuple(self.f.components) == tuple(other.f.components))


@lru_cache(maxsize=256)
def _tangent_cached(key, spec, xmax, tmax, track, directions):
    f = key.f
    ring = f.components[0].ring
    amb = Ambient(ring, len(f.components), xmax, tmax)
    gens = tangent_generators(f, spec, directions)
    labels = [lab for lab, _ in gens]
    return span([v for _, v in gens], amb, track=track, labels=labels)


def tangent_space(f, spec, reliable=False, track=False, directions=None):
    """Subspace T_G f of the jet module (for unfoldings: over the (x,t) ring,
    derivations t-linear).  reliable=True projects away the top x-degree
    (and t-degree) shell, which derivatives of truncated jets cannot see."""
    spec = as_spec(spec)
    ring = f.components[0].ring
    if reliable:
        xmax, tmax = ring.D - 1, (ring.T - 1 if ring.r else None)
    else:
        xmax = tmax = None
    if directions is not None:
        directions = tuple(directions)
    return _tangent_cached(_MapKey(f), spec, xmax, tmax, track, directions)


# ------------------------------------------------------------ T^1

def finiteness_certificate(f, spec):
    """Least N <= D-1 with every degree-N monomial vector in T_G f + m^{N+1}."""
    spec = as_spec(spec)
    if spec.group not in ("R", "K"):
        raise Refusal("refused: Nakayama certificate needs an R_X-module (R or K), got %s" % spec.group)
    S = tangent_space(f, spec, reliable=True)
    q = quotient(S)
    ring = f.components[0].ring
    h = q.hilbert
    for N in range(0, ring.D):
        if N >= len(h) or h[N] == 0:
            return N
    return None


def t1(f, spec, evidence=True):
    """QuotientData of R^p / T_G f on the reliable block (x-degree <= D-1)."""
    spec = as_spec(spec)
    S = tangent_space(f, spec, reliable=True)
    q = quotient(S)
    if spec.group in ("R", "K"):
        N = finiteness_certificate(f, spec)
        if N is not None:
            q.certified = True
            q.certificate_degree = N
            q.evidence = "certified"
    elif evidence and isinstance(f, GermMap):
        dims = [q.dimension]
        for extra in (1, 2):
            g = f.lift(f.ring.with_bounds(D=f.ring.D + extra))
            dims.append(quotient(tangent_space(g, spec, reliable=True)).dimension)
        if len(set(dims)) == 1:
            q.evidence = "D-stable"
    return q


def tjurina(g):
    q = t1(g, "K")
    return q.dimension, q.certified


def max_cobasis(q):
    """Cobasis of m.T^1 inside a T^1 quotient: the non-pivots of degree >= 1."""
    amb = q.ambient
    return [c for c in q.cobasis if amb.degree(c) >= 1]


def ta_vs_tk_check(f):
    """R_Y-span of the cobasis v of m.T^1_K f together with T_A f fills R^p
    (checked on the reliable block)."""
    if finiteness_certificate(f, "K") is None:
        raise Refusal("refused: no K-finiteness certificate")
    qK = t1(f, "K")
    amb = qK.ambient
    vs = [amb.jets({c: amb.ring.field.one}) for c in max_cobasis(qK)]
    gens = [v for _, v in tangent_generators(f, "A")]
    for beta, val in target_monomials(f.components):
        for v in vs:
            gens.append(tuple(val * c for c in v))
    S = span(gens, amb)
    return S.is_full()
