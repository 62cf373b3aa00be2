"""Rank, preliminary form, infinitesimal stability, genotypes and stable
unfoldings of map-germs."""

from dataclasses import dataclass, field as dc_field

from .echelon import Echelon
from .errors import Refusal
from .jets import INFINITE, GermMap, JetRing, jet_compose, ord_
from .linsub import Ambient, quotient, span
from .tangent import (GroupSpec, derivations, finiteness_certificate, max_cobasis,
                      t1, tangent_generators, tangent_space)
from .unfolding import _add_params


def rank(F):
    """dim of the constant parts of T_R F."""
    S = tangent_space(F, "R", reliable=True)
    amb = S.ambient
    return sum(1 for piv in S.ech.rows if amb.degree(piv) == 0)


def der_values_dim(ring):
    der = derivations(ring, -1)
    ech = Echelon(ring.field)
    for c in der.generators:
        vec = {i: ci.constant_term() for i, ci in enumerate(c) if ci.constant_term()}
        if vec:
            ech.insert(vec)
    return len(ech)


def factor_criteria(f, spec, directions=None):
    """Equality of T_G f with its level-0 filtered version (I = m, or
    I = (directions) when given)."""
    spec = GroupSpec(spec) if isinstance(spec, str) else spec
    if f.ring.field.characteristic != 0:
        raise Refusal("refused: factorization criterion stated for char 0 only")
    g = spec.group
    full = tangent_space(f, GroupSpec(g), reliable=True, directions=directions)
    if g in ("R", "K"):
        filt = tangent_space(f, GroupSpec(g, 0), reliable=True, directions=directions)
    elif g == "A":
        amb = full.ambient
        gens = [v for _, v in tangent_generators(f, GroupSpec("R", 0), directions)]
        gens += [v for _, v in tangent_generators(f, GroupSpec("L"), directions)]
        filt = span(gens, amb)
    else:
        raise Refusal("refused: factor criterion defined for R, K, A")
    return full == filt


# ------------------------------------------------------------ preliminary form

def _solve_rows(field, rows, ncols, prefer_last=False):
    """Greedy independent subset of `rows` (lists of scalars); returns indices
    and the echelon used (for expressing other rows)."""
    order = list(range(ncols))
    if prefer_last:
        order = order[::-1]
    col_of = {c: i for i, c in enumerate(order)}
    ech = Echelon(field, track=True)
    keep = []
    for i, r in enumerate(rows):
        vec = {col_of[c]: a for c, a in enumerate(r) if a}
        if ech.insert(vec) is not None:
            keep.append(i)
    return keep, ech


@dataclass
class PreliminaryForm:
    core: tuple               # jets in the x~ ring (possibly empty)
    h: tuple                  # jets in (x~, u) ring
    u: tuple                  # parameter names
    xt: tuple                 # reduced variable names x~
    ring: JetRing             # (x~, u) ring
    core_ring: JetRing
    pivot_rows: list
    other_rows: list
    target_matrix: list       # rows of L: new components = L . F
    source_images: dict       # old variable -> jet in (x~, u) ring
    pure_u: tuple             # phi_l(u) removed by the final target change

    def core_map(self):
        if not self.core:
            return None
        return GermMap(self.core_ring, self.core)

    def assemble(self):
        R2 = self.ring
        top = [R2.convert(c) + hh for c, hh in zip(self.core, self.h)]
        return top + [R2.var(u) for u in self.u]

    def forward(self, F):
        """Apply the recorded transformations to F."""
        R2 = self.ring
        Fc = F.components
        field = F.ring.field
        G = []
        for row in self.target_matrix:
            acc = F.ring.zero()
            for a, c in zip(row, Fc):
                if a:
                    acc = acc + c.scale(a)
            G.append(acc)
        G2 = [jet_compose(g, self.source_images, R2) for g in G]
        ntop = len(self.core)
        out = [g - ph for g, ph in zip(G2[:ntop], self.pure_u)] + G2[ntop:]
        return out


def preliminary_form(F):
    ring = F.ring
    if ring.has_relations:
        raise Refusal("refused: preliminary form needs J = 0 here (constructive factorization is out of scope)")
    field = ring.field
    n, P = ring.n, F.p
    lin = [[c.coeff(tuple(1 if k == i else 0 for k in range(n))) for i in range(n)]
           for c in F.components]
    piv_rows, rech = _solve_rows(field, lin, n)
    r = len(piv_rows)
    other = [l for l in range(P) if l not in piv_rows]
    # target change: other rows minus combination of pivot rows (kills linear parts)
    L = []
    for l in other:
        row = [field.zero] * P
        row[l] = field.one
        # express lin[l] in the span of the pivot rows
        ech = Echelon(field, track=True)
        for i in piv_rows:
            ech.insert({c: a for c, a in enumerate(lin[i]) if a})
        res, combo = ech.reduce({c: a for c, a in enumerate(lin[l]) if a}, {})
        assert not res
        for gid, coef in combo.items():   # lin[l] - sum(-coef) lin[piv] = 0
            row[piv_rows[gid]] = field.add(row[piv_rows[gid]], coef)
        L.append(row)
    for i in piv_rows:
        row = [field.zero] * P
        row[i] = field.one
        L.append(row)
    Gc = []
    for row in L:
        acc = ring.zero()
        for a, c in zip(row, F.components):
            if a:
                acc = acc + c.scale(a)
        Gc.append(acc)
    bottom = Gc[len(other):]
    B = [[c.coeff(tuple(1 if k == i else 0 for k in range(n))) for i in range(n)] for c in bottom]
    # pivot columns, preferring the last variables
    cols = []
    if r:
        ech = Echelon(field)
        for c in reversed(range(n)):
            vec = {j: B[j][c] for j in range(r) if B[j][c]}
            if vec and ech.insert(vec) is not None:
                cols.append(c)
        cols.sort()
    assert len(cols) == r
    xt = tuple(v for i, v in enumerate(ring.xvars) if i not in cols)
    unames = tuple(ring.xvars[c] for c in cols)
    R2 = JetRing(field, xt + unames, (), ring.D)
    Rc = JetRing(field, xt, (), ring.D) if xt else None
    # implicit function iteration: x_piv = Bp^{-1}(u - Brest x~ - Q(x))
    Bp = [[B[j][c] for c in cols] for j in range(r)]
    Bpinv = _inverse(field, Bp) if r else []
    images = {v: R2.var(v) for v in xt}
    lin_parts = []
    for j in range(r):
        q = ring.zero()
        for m, c in bottom[j].terms.items():
            if ring.deg[m] >= 2:
                q = q + ring.monomial(m).scale(c)
        rest = R2.var(unames[j])
        for i, v in enumerate(ring.xvars):
            if i not in cols and B[j][i]:
                rest = rest - R2.var(v).scale(B[j][i])
        lin_parts.append((rest, q))
    X = [R2.zero() for _ in cols]

    def current():
        im = dict(images)
        for k, c in enumerate(cols):
            im[ring.xvars[c]] = X[k]
        return im

    for k in range(r):
        acc = R2.zero()
        for j in range(r):
            if Bpinv[k][j]:
                acc = acc + lin_parts[j][0].scale(Bpinv[k][j])
        X[k] = acc
    for _ in range(ring.D):
        im = current()
        qv = [jet_compose(lp[1], im, R2) if not lp[1].is_zero() else R2.zero() for lp in lin_parts]
        newX = []
        for k in range(r):
            acc = R2.zero()
            for j in range(r):
                if Bpinv[k][j]:
                    acc = acc + (lin_parts[j][0] - qv[j]).scale(Bpinv[k][j])
            newX.append(acc)
        if newX == X:
            break
        X = newX
    im = current()
    G2 = [jet_compose(g, im, R2) for g in Gc]
    for j in range(r):
        if G2[len(other) + j] != R2.var(unames[j]):
            raise AssertionError("implicit function iteration did not converge")
    ntop = len(other)
    core, hs, phis = [], [], []
    nxt = len(xt)
    for g in G2[:ntop]:
        fpart, hpart, ppart = {}, {}, {}
        for m, c in g.terms.items():
            e = R2.exps[m]
            xd, ud = sum(e[:nxt]), sum(e[nxt:])
            if ud == 0:
                fpart[e[:nxt]] = c
            elif xd == 0:
                ppart[m] = c
            else:
                hpart[m] = c
        core.append(Rc.jet(fpart) if Rc is not None else None)
        hs.append(R2.jet(hpart))
        phis.append(R2.jet(ppart))
    if Rc is None:
        if any(c is not None and not c.is_zero() for c in core):
            raise AssertionError("core without variables")
        core = []
        hs = []
        phis = []
    return PreliminaryForm(tuple(core), tuple(hs), unames, xt, R2, Rc, piv_rows, other, L,
                           im, tuple(phis))


def _inverse(field, M):
    n = len(M)
    A = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c])
        A[c], A[piv] = A[piv], A[c]
        inv = field.inv(A[c][c])
        A[c] = [field.mul(a, inv) for a in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(A[i], A[c])]
    return [row[n:] for row in A]


# ------------------------------------------------------------ genotype / stability

@dataclass
class GenotypeReport:
    genotype: GermMap          # None when the core block is empty
    generators: list           # strings of the cobasis v of (x).T^1_K f
    certificate: bool
    matched: list              # class strings of the u-linear parts h_j
    params: tuple = ()
    prelim: PreliminaryForm = None


def _u_linear(pf, j):
    """Coefficient of u_j in h (terms of u-degree exactly 1), as core-ring jets."""
    R2 = pf.ring
    nxt = len(pf.xt)
    k = nxt + j
    out = []
    for hh in pf.h:
        terms = {}
        for m, c in hh.terms.items():
            e = R2.exps[m]
            if sum(e[nxt:]) == 1 and e[k] == 1:
                terms[e[:nxt]] = c
        out.append(pf.core_ring.jet(terms))
    return tuple(out)


def genotype(F):
    pf = preliminary_form(F)
    f = pf.core_map()
    if f is None:
        return GenotypeReport(None, [], True, [], pf.u, pf)
    if finiteness_certificate(f, "K") is None:
        raise Refusal("refused: genotype is not K-finite (no certificate)")
    qK = t1(f, "K")
    amb = qK.ambient
    v = max_cobasis(qK)
    SK = tangent_space(f, "K", reliable=True)
    ech = Echelon(f.ring.field)
    ech.rows = {k: dict(r) for k, r in SK.ech.rows.items()}
    matched = []
    for j in range(len(pf.u)):
        hj = amb.vec(_u_linear(pf, j))
        matched.append(amb.vec_str(SK.reduce(hj)))
        ech.insert(hj)
    cert = all(c in ech.rows for c in amb.columns if amb.degree(c) >= 1)
    return GenotypeReport(f, [amb.coord_str(c) for c in v], cert, matched, pf.u, pf)


@dataclass
class StabilityVerdict:
    kind: str                  # CertifiedStable | JetLevelStable | NotStable
    residue: list = dc_field(default_factory=list)
    genotype: GenotypeReport = None
    note: str = ""

    def __str__(self):
        if self.kind == "NotStable":
            return "NotStable(residue: %s)" % ", ".join(self.residue)
        return self.kind


def inf_stable(F):
    S = tangent_space(F, "A", reliable=True)
    if not S.is_full():
        q = quotient(S)
        return StabilityVerdict("NotStable", q.cobasis_str())
    try:
        g = genotype(F)
    except Refusal as e:
        return StabilityVerdict("JetLevelStable", note=str(e))
    if g.certificate:
        return StabilityVerdict("CertifiedStable", genotype=g)
    return StabilityVerdict("JetLevelStable", genotype=g, note="u-linear classes do not span (x).T1_K f")


def stable_unfolding(f, prefix="t"):
    if finiteness_certificate(f, "K") is None:
        raise Refusal("refused: no K-finiteness certificate")
    qK = t1(f, "K")
    cols = max_cobasis(qK)
    while any(v.startswith(prefix) for v in f.ring.vars):
        prefix = prefix + "_"
    return _add_params(f, qK.ambient, cols, prefix, as_germ=True)


def k_fingerprint(f):
    """Necessary-condition K-invariants of a germ (None = empty core)."""
    if f is None:
        return {"components": 0, "source_dim": 0, "tau": 0, "hilbert": [], "ord": "infinite"}
    q = t1(f, "K")
    o = ord_(f)
    return {"components": f.p, "source_dim": f.ring.n, "tau": q.dimension,
            "hilbert": list(q.hilbert), "ord": str(o) if o is INFINITE else o}


def fingerprint(g):
    """K-fingerprint of a genotype report, plus its parameter count."""
    fp = k_fingerprint(g.genotype)
    fp["params"] = len(g.params)
    return fp


@dataclass
class Comparison:
    kind: str                  # EquivalentGenotypeFingerprints | Distinguished
    reason: str = ""
    fingerprints: tuple = ()

    def __str__(self):
        return self.kind if not self.reason else "%s(%s)" % (self.kind, self.reason)


def compare_stable(F1, F2):
    gs = []
    for F in (F1, F2):
        v = inf_stable(F)
        if v.kind != "CertifiedStable":
            raise Refusal("refused: map is not certified stable (%s)" % v)
        gs.append(v.genotype)
    a, b = fingerprint(gs[0]), fingerprint(gs[1])
    keys = ["params", "components", "source_dim", "tau", "hilbert", "ord"]
    names = {"params": "parameter counts"}
    diff = ["%s: %s vs %s" % (names.get(k, k), a[k], b[k]) for k in keys if a[k] != b[k]]
    if diff:
        return Comparison("Distinguished", " / ".join(diff), (a, b))
    return Comparison("EquivalentGenotypeFingerprints", "", (a, b))
