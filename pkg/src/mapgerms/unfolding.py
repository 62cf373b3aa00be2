"""Unfoldings: infinitesimal triviality and versality, pre-normal forms by
genuine group elements, separability verdicts, the K-to-A transversal."""

from dataclasses import dataclass, field as dc_field
from math import factorial

from .errors import Refusal
from .jets import (GermMap, JetRing, UnfoldingMap, embed, jet_partial,
                   jet_substitute, restrict_t0, t_coefficients, mono_key, _exps_upto)
from .linsub import Ambient, QuotientData, quotient, span
from .echelon import Echelon
from .tangent import (as_spec, derivations, finiteness_certificate, max_cobasis,
                      t1, tangent_generators, tangent_space, target_monomials)


# ------------------------------------------------------------ triviality

@dataclass
class TrivialityVerdict:
    param: str
    trivial: bool
    residue: str
    witness: list        # [(label, coeff)] expressing d_t f in T_{G_t} f_t
    witness_vector: tuple = None


def _labelled(S, combo):
    return sorted(((S.labels[g], c) for g, c in combo.items()), key=lambda lc: repr(lc[0]))


def inf_trivial(F, spec):
    """Membership of each d_{t_i} f_t in T_{G_t} f_t (reliable (x,t) block)."""
    spec = as_spec(spec)
    S = tangent_space(F, spec, reliable=True, track=True)
    amb = S.ambient
    out = []
    for tv in F.ring.tvars:
        d = tuple(jet_partial(c, tv) for c in F.components)
        mem = S.member(amb.vec(d))
        wit = _labelled(S, mem.witness) if mem.ok else []
        out.append(TrivialityVerdict(tv, mem.ok, amb.vec_str(mem.residue), wit, d))
    return out


# ------------------------------------------------------------ group elements

@dataclass
class GroupElement:
    """One step g = (source substitution, unit, target change) at t^tmono.

    subst: {x_i: c_i} (germ-ring jets); x_i -> x_i - t^m c_i  (or the
    exponential of the derivation when `exp` is set, J != 0 in char 0).
    unit: {(l, k): u_lk}; f_l -> f_l - t^m sum_k u_lk f_k.
    target: [{beta: coeff}] per component; f_l -> f_l - t^m h_l(f)."""

    tmono: tuple
    subst: dict = dc_field(default_factory=dict)
    unit: dict = dc_field(default_factory=dict)
    target: list = None
    exp: bool = False

    def is_identity(self):
        return (not any(not c.is_zero() for c in self.subst.values())
                and not any(not u.is_zero() for u in self.unit.values())
                and not (self.target and any(self.target)))

    def describe(self, tvars):
        tm = _tmono_str(self.tmono, tvars)
        parts = []
        for v, c in self.subst.items():
            if not c.is_zero():
                parts.append("%s -> %s - %s*(%s)" % (v, v, tm, c))
        for (l, k), u in sorted(self.unit.items()):
            if not u.is_zero():
                parts.append("unit[%d,%d] -= %s*(%s)" % (l + 1, k + 1, tm, u))
        if self.target:
            for l, h in enumerate(self.target):
                for beta, c in sorted(h.items()):
                    if c:
                        parts.append("target y%d -= %s*%s*%s" % (l + 1, c, tm, _ymono_str(beta)))
        return "; ".join(parts) if parts else "identity"


def _tmono_str(e, tvars):
    parts = []
    for v, a in zip(tvars, e):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append("%s^%d" % (v, a))
    return "*".join(parts) or "1"


def _ymono_str(beta):
    parts = []
    for i, a in enumerate(beta):
        if a == 1:
            parts.append("y%d" % (i + 1))
        elif a > 1:
            parts.append("y%d^%d" % (i + 1, a))
    return "*".join(parts) or "1"


def apply_element(g, comps, ring, der=None):
    """Apply a logged group element to the components (jets of `ring`)."""
    tm = ring.jet({(0,) * ring.n + tuple(g.tmono): 1})
    comps = list(comps)
    if g.subst and any(not c.is_zero() for c in g.subst.values()):
        if not g.exp:
            assign = {v: ring.var(v) - tm * embed(c, ring) for v, c in g.subst.items()}
        else:
            assign = _exp_images(g, ring, tm)
        comps = [jet_substitute(c, assign) for c in comps]
    if g.unit:
        new = []
        for l, fl in enumerate(comps):
            acc = fl
            for k, fk in enumerate(comps):
                u = g.unit.get((l, k))
                if u is not None and not u.is_zero():
                    acc = acc - tm * embed(u, ring) * fk
            new.append(acc)
        comps = new
    if g.target:
        cache = {}
        new = []
        for l, fl in enumerate(comps):
            acc = fl
            for beta, c in g.target[l].items():
                if c:
                    acc = acc - tm * _ypow(comps, beta, cache, ring).scale(c)
            new.append(acc)
        comps = new
    return comps


def _ypow(comps, beta, cache, ring):
    if beta in cache:
        return cache[beta]
    val = ring.one()
    for c, b in zip(comps, beta):
        if b:
            val = val * c ** b
    cache[beta] = val
    return val


def _exp_images(g, ring, tm):
    # x_i -> exp(-t^m xi)(x_i) = sum_k (-t^m)^k / k! xi^k(x_i)
    F = ring.field
    cs = {v: embed(c, ring) for v, c in g.subst.items()}

    def xi(h):
        out = ring.zero()
        for v, c in cs.items():
            if not c.is_zero():
                out = out + c * jet_partial(h, v)
        return out

    images = {}
    for v in ring.xvars:
        term = ring.var(v)
        total = term
        k = 1
        while True:
            term = xi(term)
            if term.is_zero():
                break
            piece = (tm ** k) * term
            if piece.is_zero():
                break
            coef = F((-1) ** k) * F.inv(F(factorial(k)))
            total = total + piece.scale(coef)
            k += 1
        images[v] = total
    return images


# ------------------------------------------------------------ pre-normal form

@dataclass
class PreNormalForm:
    base: GermMap
    spec: object
    cobasis: list                # strings of the v_j
    coefficients: dict           # v_j string -> {t-exps: coeff} (a_j(t)); for A-of-K: may involve y
    complete: bool               # every t-degree <= T_max was processed
    log: list                    # GroupElement list
    reduced: list                # resulting components (jets of `ring`)
    ring: JetRing
    T_max: int
    first_class: tuple = None    # (t-degree, t-exps, class string) of the first nonzero class
    certified: bool = True       # f_o had a Nakayama certificate and the input was exact
    classes: list = dc_field(default_factory=list)   # [(t-exps, residue dict)] per step
    ambient: Ambient = None

    def all_zero(self):
        return not any(self.coefficients.values())

    def a_str(self, key):
        c = self.coefficients.get(key, {})
        if not c:
            return "0"
        tv = self.ring.tvars
        parts = []
        for e in sorted(c, key=mono_key):
            ys = ""
            te = e
            if len(e) > len(tv):
                te, ye = e[: len(tv)], e[len(tv):]
                ys = _ymono_str(ye)
                ys = "" if ys == "1" else "*" + ys
            ms = _tmono_str(te, tv)
            coeff = c[e]
            parts.append((ms if coeff == 1 else "%s*%s" % (coeff, ms)) + ys)
        return " + ".join(parts)


def _t_exps(r, d):
    es = [e for e in _exps_upto(r, d) if sum(e) == d]
    es.sort(key=mono_key)
    return es


def _internal_rings(F, T_max, N0):
    N0 = max(N0, 1)
    W = max(T_max + N0 - 1, 1)
    ring = F.ring
    G = JetRing(ring.field, ring.xvars, (), W + 1, 0, [dict(r) for r in ring.relation_polys])
    Fam = JetRing(ring.field, ring.xvars, ring.tvars, W, T_max,
                  [dict(r) for r in ring.relation_polys], W)
    return G, Fam, W


def _witness_element(S, combo, tmono, G, spec_group, der=None, vlabels=None):
    """Turn a reduction witness into a group element (and collect V-part)."""
    F = G.field
    subst = {v: {} for v in G.xvars}
    unit = {}
    target = None
    vpart = {}
    der_coeffs = None
    for gid, c in combo.items():
        lab = S.labels[gid]
        kind = lab[0]
        if kind == "R":
            _, i, m = lab
            v = G.xvars[i]
            subst[v][m] = F.add(subst[v].get(m, F.zero), c)
        elif kind == "Rd":
            _, k, _tm = lab
            if der_coeffs is None:
                der_coeffs = [G.zero() for _ in G.xvars]
            der_coeffs = [a + b.scale(c) for a, b in zip(der_coeffs, der.generators[k])]
        elif kind == "K":
            _, k, l, m = lab
            d = unit.setdefault((l, k), {})
            d[m] = F.add(d.get(m, F.zero), c)
        elif kind == "L":
            _, beta, l, _tm = lab
            if target is None:
                target = [dict() for _ in range(S.ambient.p)]
            target[l][beta] = F.add(target[l].get(beta, F.zero), c)
        elif kind == "V":
            _, beta, j = lab
            vpart[(j, beta)] = F.add(vpart.get((j, beta), F.zero), c)
    sj = {v: G.jet(t) for v, t in subst.items()}
    if der_coeffs is not None:
        sj = {v: sj[v] + d for v, d in zip(G.xvars, der_coeffs)}
    uj = {k: G.jet(t) for k, t in unit.items()}
    g = GroupElement(tuple(tmono), sj, uj, target, exp=G.has_relations)
    return g, vpart


def _run_reduction(F, spec, T_max, S, G, Fam, der, certified, vlabels=None):
    """Core loop shared by prenormal and a_prenormal_of_k_trivial."""
    amb = S.ambient
    comps = [Fam.jet(pp, names=F.ring.vars) for pp in F.polys] if F.polys is not None \
        else [Fam.convert(c) for c in F.components]
    log = []
    classes = []
    coeffs = {}
    vcoeffs = {}
    first = None
    r = F.ring.r
    zero_x = G.zero()
    for d in range(1, T_max + 1):
        for te in _t_exps(r, d):
            blocks = [t_coefficients(c).get(te) for c in comps]
            blocks = [G.convert(b) if b is not None else zero_x for b in blocks]
            vec = amb.vec(tuple(blocks))
            if not vec:
                continue
            res, combo = S.ech.reduce(vec, {})
            if vlabels is not None and res:
                raise Refusal("refused: unfolding is not K-trivial at jet level (t-degree %d)" % d)
            witness = {gid: G.field.neg(c) for gid, c in combo.items()}
            if res:
                classes.append((te, res))
                for col, c in res.items():
                    coeffs.setdefault(col, {})[te] = c
                if first is None:
                    first = (d, te, amb.vec_str(res))
            g, vpart = _witness_element(S, witness, te, G, as_spec(spec).group, der)
            for (j, beta), c in vpart.items():
                if c:
                    vcoeffs.setdefault(j, {})[te + beta] = c
            if not g.is_identity():
                comps = apply_element(g, comps, Fam)
                log.append(g)
    return comps, log, classes, coeffs, vcoeffs, first


def prenormal(F, spec="K", T_max=None):
    """Reduce F degree by degree in t towards f_o + sum a_j(t) v_j."""
    spec = as_spec(spec)
    ring = F.ring
    if not ring.jet0_guaranteed:
        raise Refusal("refused: jet0 not guaranteed in char p with J != 0")
    if T_max is None:
        T_max = 2 * ring.D
    cert_group = spec.group if spec.group in ("R", "K") else "K"
    N0 = finiteness_certificate(F.base, cert_group)
    certified = N0 is not None and (F.polys is not None or ring.D >= T_max + N0)
    if N0 is None:
        N0 = ring.D
    G, Fam, W = _internal_rings(F, T_max, N0)
    fo = F.base.lift(G)
    S = tangent_space(fo, spec, reliable=True, track=True)
    der = derivations(G, spec.level) if G.has_relations else None
    q = quotient(S)
    comps, log, classes, coeffs, _, first = _run_reduction(F, spec, T_max, S, G, Fam, der, certified)
    amb = S.ambient
    cob = q.cobasis
    coef_named = {amb.coord_str(c): coeffs.get(c, {}) for c in cob}
    for c in coeffs:
        if c not in cob:   # cannot happen: residues live on non-pivots
            raise AssertionError("class outside cobasis")
    return PreNormalForm(F.base, spec, [amb.coord_str(c) for c in cob], coef_named, True, log,
                         comps, Fam, T_max, first, certified, classes, amb)


def replay(pnf, F):
    """Apply the group log of `pnf` to F (re-read in pnf's ring)."""
    Fam = pnf.ring
    comps = [Fam.jet(pp, names=F.ring.vars) for pp in F.polys] if F.polys is not None \
        else [Fam.convert(c) for c in F.components]
    for g in pnf.log:
        comps = apply_element(g, comps, Fam)
    return comps


def normal_form_components(pnf):
    """f_o + sum_j a_j(t) v_j as jets of pnf.ring (for checking replay)."""
    Fam = pnf.ring
    G = pnf.ambient.ring
    comps = [embed(c, Fam) for c in pnf.base.lift(G).components]
    amb = pnf.ambient
    for te, res in pnf.classes:
        vecs = amb.jets(res)
        comps = [c + embed(v, Fam, te) for c, v in zip(comps, vecs)]
    return comps


# ------------------------------------------------------------ separability

@dataclass
class SeparabilityVerdict:
    kind: str            # TrivialUpTo | SeparableObstruction | Inseparable
    degree: int
    cls: str = None
    prenormal: PreNormalForm = None

    def __str__(self):
        if self.kind == "TrivialUpTo":
            return "TrivialUpTo(%d)" % self.degree
        return "%s(%d, %s)" % (self.kind, self.degree, self.cls)


def separability(F, spec="K", T_max=None):
    if F.ring.r != 1:
        raise Refusal("refused: separability defined for one parameter")
    if not F.ring.jet0_guaranteed:
        raise Refusal("refused: jet0 not guaranteed in char p with J != 0")
    if T_max is None:
        T_max = 2 * F.ring.D
    pnf = prenormal(F, spec, T_max)
    if pnf.first_class is None:
        return SeparabilityVerdict("TrivialUpTo", T_max, None, pnf)
    d, _, cls = pnf.first_class
    p = F.ring.field.characteristic
    kind = "Inseparable" if (p and d % p == 0) else "SeparableObstruction"
    return SeparabilityVerdict(kind, d, cls, pnf)


# ------------------------------------------------------------ versality

@dataclass
class VersalityVerdict:
    versal: bool
    classes: list        # class strings of d_{t_i} f_t |_{t=0} in T^1
    t1_dim: int
    certified: bool


def inf_versal(F, spec="K"):
    spec = as_spec(spec)
    fo = F.base
    S = tangent_space(fo, spec, reliable=True)
    amb = S.ambient
    q = t1(fo, spec, evidence=False)
    classes = []
    ech = S.ech.copy() if not S.ech.track else None
    if ech is None:
        ech = Echelon(fo.ring.field)
        ech.rows = {k: dict(v) for k, v in S.ech.rows.items()}
    for tv in F.ring.tvars:
        d = tuple(restrict_t0(jet_partial(c, tv), fo.ring) for c in F.components)
        v = amb.vec(d)
        classes.append(amb.vec_str(S.reduce(v)))
        ech.insert(v)
    return VersalityVerdict(len(ech) == amb.dim, classes, q.dimension, q.certified)


def versal_construct(f, spec="K", prefix="t", T=None):
    spec = as_spec(spec)
    if spec.group not in ("R", "K"):
        raise Refusal("refused: no certificate for %s (A-certificates unavailable)" % spec.group)
    q = t1(f, spec, evidence=False)
    if not q.certified:
        raise Refusal("refused: no finiteness certificate for T^1_%s f" % spec.group)
    return _add_params(f, q.ambient, q.cobasis, prefix, T)


def _add_params(f, amb, cols, prefix, T=None, as_germ=False):
    k = len(cols)
    ring = f.ring
    names = tuple("%s%d" % (prefix, i + 1) for i in range(k)) if (k > 1 or as_germ) else ((prefix,) if k else ())
    if as_germ:
        # parameters become source variables: a germ (f + sum t_j v_j, t)
        R2 = JetRing(ring.field, ring.xvars + names, (), ring.D,
                     relations=[{e + (0,) * k: c for e, c in r.items()} for r in ring.relation_polys])
    else:
        R2 = ring.family_ring(names, T if T is not None else max(2, 2 * ring.D)) if k else ring
    polys = [dict(pp) for pp in f.polys] if f.polys is not None else \
        [{ring.exps[m]: c for m, c in comp.terms.items()} for comp in f.components]
    polys = [{e + (0,) * k: c for e, c in pp.items()} for pp in polys]
    for j, col in enumerate(cols):
        comp, m = amb.coord(col)
        e = ring.exps[m][: ring.n] + tuple(1 if i == j else 0 for i in range(k))
        polys[comp][e] = ring.field.add(polys[comp].get(e, ring.field.zero), ring.field.one)
    if as_germ:
        for j in range(k):
            polys.append({(0,) * ring.n + tuple(1 if i == j else 0 for i in range(k)): ring.field.one})
        return GermMap.from_polys(R2, polys)
    if not k:
        return UnfoldingMap(ring, f.components, polys=f.polys, base=f)
    return UnfoldingMap.from_polys(R2, polys)


# ------------------------------------------------------------ K -> A transversal

def _xf_generators(f):
    ring = f.ring
    p = f.p
    zero = ring.zero()
    out = []
    for m in ring.standard:
        if ring.xdeg[m] < 1:
            continue
        mj = ring.monomial(m)
        for k, c in enumerate(f.components):
            prod = mj * c
            if prod.is_zero():
                continue
            for l in range(p):
                vec = [zero] * p
                vec[l] = prod
                out.append(tuple(vec))
    return out


def k_to_a_transversal(f):
    """(x)(f)R^p / (T_A f cap (x)(f)R^p), realized as ((x)(f)R^p + T_A f) / T_A f."""
    if finiteness_certificate(f, "K") is None:
        raise Refusal("refused: no K-finiteness certificate")
    SA = tangent_space(f, "A", reliable=True)
    amb = SA.ambient
    ech = Echelon(f.ring.field)
    gens = []
    for v in _xf_generators(f):
        vec = amb.vec(v)
        res = SA.reduce(vec)
        if res and ech.insert(res) is not None:
            gens.append(vec)
    piv = sorted(ech.rows)
    hil = {}
    for c in piv:
        hil[amb.degree(c)] = hil.get(amb.degree(c), 0) + 1
    h = [hil.get(i, 0) for i in range(max(hil) + 1)] if hil else []
    return QuotientData(len(piv), piv, h, amb, generators=gens)


def a_prenormal_of_k_trivial(F, T_max=None):
    ring = F.ring
    if not ring.jet0_guaranteed:
        raise Refusal("refused: jet0 not guaranteed in char p with J != 0")
    if T_max is None:
        T_max = 2 * ring.D
    if not all(v.trivial for v in inf_trivial(F, "K")):
        raise Refusal("refused: unfolding is not K-trivial at jet level")
    N0 = finiteness_certificate(F.base, "K")
    if N0 is None:
        raise Refusal("refused: no K-finiteness certificate")
    certified = F.polys is not None or ring.D >= T_max + N0
    G, Fam, W = _internal_rings(F, T_max, N0)
    fo = F.base.lift(G)
    trans = k_to_a_transversal(fo)
    amb = Ambient(G, fo.p, xmax=G.D - 1)
    gens = tangent_generators(fo, "A")
    labels = [lab for lab, _ in gens]
    vecs = [amb.vec(v) for _, v in gens]
    tm = target_monomials(fo)
    for j, v in enumerate(trans.generators):
        vj = amb.jets(v)
        for beta, val in tm:
            labels.append(("V", beta, j))
            vecs.append(amb.vec(tuple(val * c for c in vj)))
    S = span(vecs, amb, track=True, labels=labels)
    comps, log, classes, coeffs, vcoeffs, first = _run_reduction(
        F, "A", T_max, S, G, Fam, None, certified, vlabels=True)
    vnames = [amb.vec_str(v) for v in trans.generators]
    coef_named = {vnames[j]: vcoeffs.get(j, {}) for j in range(len(vnames))}
    first_v = None
    return PreNormalForm(F.base, as_spec("A"), vnames, coef_named, True, log, comps, Fam,
                         T_max, first_v, certified, classes, amb)
