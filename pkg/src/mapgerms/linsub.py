"""Subspaces of free jet modules R^p: spans, membership, quotients.

Coordinates are (component, monomial) pairs.  Column index = position of the
monomial in the ring's local order * p + component, so the pivot order is
(monomial order, then component).
"""

from dataclasses import dataclass, field as dc_field

from .echelon import Echelon
from .errors import ContextMismatch
from .jets import Jet

_AMB_CACHE = {}


class Ambient:
    """The block of R^p a subspace lives in, optionally cut down to
    x-degree <= xmax and t-degree <= tmax (everything else projected away)."""

    def __new__(cls, ring, p=1, xmax=None, tmax=None):
        key = (ring, p, xmax, tmax)
        hit = _AMB_CACHE.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.ring = ring
        self.p = p
        self.xmax = xmax
        self.tmax = tmax
        cols = []
        for m in ring.standard:
            if xmax is not None and ring.xdeg[m] > xmax:
                continue
            if tmax is not None and ring.tdeg[m] > tmax:
                continue
            for j in range(p):
                cols.append(ring.pos[m] * p + j)
        cols.sort()
        self.columns = cols
        self.colset = frozenset(cols)
        _AMB_CACHE[key] = self
        return self

    def __repr__(self):
        return "Ambient(%r, p=%d, xmax=%s, tmax=%s)" % (self.ring, self.p, self.xmax, self.tmax)

    @property
    def dim(self):
        return len(self.columns)

    def coord(self, col):
        """col -> (component index 0-based, packed monomial)."""
        return col % self.p, self.ring.order[col // self.p]

    def col(self, comp, mono):
        return self.ring.pos[mono] * self.p + comp

    def vec(self, jets):
        """Vector of a p-tuple of jets (or a single jet when p = 1)."""
        if isinstance(jets, Jet):
            jets = (jets,)
        if len(jets) != self.p:
            raise ContextMismatch("expected %d components, got %d" % (self.p, len(jets)))
        p = self.p
        pos = self.ring.pos
        cs = self.colset
        out = {}
        for j, f in enumerate(jets):
            if f.ring is not self.ring:
                raise ContextMismatch("vector component from a different ring")
            for m, c in f.terms.items():
                k = pos[m] * p + j
                if k in cs:
                    out[k] = c
        return out

    def unit(self, comp, mono):
        return {self.col(comp, mono): self.ring.field.one}

    def jets(self, vec):
        p = self.p
        order = self.ring.order
        parts = [dict() for _ in range(p)]
        for k, c in vec.items():
            parts[k % p][order[k // p]] = c
        return tuple(Jet(self.ring, t) for t in parts)

    def coord_str(self, col):
        j, m = self.coord(col)
        ms = self.ring.mono_str(m)
        if self.p == 1:
            return ms
        return ("e%d" % (j + 1)) if ms == "1" else "%s*e%d" % (ms, j + 1)

    def vec_str(self, vec):
        if not vec:
            return "0"
        F = self.ring.field
        out = []
        for k in sorted(vec):
            c = vec[k]
            s = self.coord_str(k)
            if c == 1:
                out.append(s)
            else:
                out.append("%s*%s" % (F.fmt(c), s))
        return " + ".join(out)

    def degree(self, col):
        return self.ring.deg[self.ring.order[col // self.p]]

    def full_vectors(self):
        one = self.ring.field.one
        return [{c: one} for c in self.columns]


@dataclass
class Membership:
    ok: bool
    residue: dict
    witness: dict   # generator index -> coefficient (only with tracking)

    def __iter__(self):
        return iter((self.ok, self.residue, self.witness))


class Subspace:
    def __init__(self, ambient, ech, labels=None):
        self.ambient = ambient
        self.ech = ech
        self.labels = labels

    @property
    def rank(self):
        return len(self.ech)

    def __len__(self):
        return self.rank

    @property
    def pivots(self):
        return sorted(self.ech.rows)

    @property
    def basis(self):
        self.ech.rref()
        return [self.ech.rows[k] for k in sorted(self.ech.rows)]

    def basis_jets(self):
        return [self.ambient.jets(v) for v in self.basis]

    def _check(self, amb):
        if amb is not self.ambient:
            raise ContextMismatch("ambient mismatch: %r vs %r" % (amb, self.ambient))

    def reduce(self, vec):
        return self.ech.reduce(self._clip(vec))[0]

    def _clip(self, vec):
        cs = self.ambient.colset
        return {k: c for k, c in vec.items() if k in cs}

    def member(self, vec):
        vec = self._clip(vec)
        track = self.ech.track
        combo = {} if track else None
        res, combo = self.ech.reduce(vec, combo)
        if track and not res:
            # vec = sum combo'[g] gen_g where combo' = -combo
            F = self.ambient.ring.field
            wit = {g: F.neg(c) for g, c in combo.items()}
        else:
            wit = {}
        return Membership(not res, res, wit)

    def contains(self, vec):
        return not self.reduce(vec)

    def contains_space(self, other):
        self._check(other.ambient)
        return all(self.contains(v) for v in other.ech.rows.values())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient is other.ambient and self.rank == other.rank
                and self.contains_space(other))

    def is_full(self):
        return self.rank == self.ambient.dim

    def missing(self):
        """Non-pivot coordinates (a cobasis of ambient / self)."""
        rows = self.ech.rows
        return [c for c in self.ambient.columns if c not in rows]

    def __repr__(self):
        return "Subspace(rank=%d in %r)" % (self.rank, self.ambient)


def span(vectors, ambient, track=False, labels=None):
    """Echelon basis of the span of sparse vectors (dicts col -> scalar)."""
    ech = Echelon(ambient.ring.field, track=track)
    cs = ambient.colset
    full = ambient.dim
    for v in vectors:
        if isinstance(v, (tuple, Jet)):
            v = ambient.vec(v)
        else:
            for k in v:
                if k not in cs:
                    raise ContextMismatch("vector coordinate outside the ambient")
        ech.insert(v)
        if len(ech.rows) == full:
            break     # nothing left to span; later generators are not needed
    return Subspace(ambient, ech, labels=labels)


def zero_subspace(ambient):
    return Subspace(ambient, Echelon(ambient.ring.field))


def member(v, S):
    return S.member(v)


@dataclass
class QuotientData:
    dimension: int
    cobasis: list                 # columns of the ambient
    hilbert: list
    ambient: Ambient = None
    certified: bool = False
    certificate_degree: int = None
    evidence: str = "jet-level"   # "certified" | "jet-level" | "D-stable"
    generators: list = dc_field(default_factory=list)   # optional explicit vectors v_j

    def cobasis_str(self):
        return [self.ambient.coord_str(c) for c in self.cobasis]

    def cobasis_vectors(self):
        one = self.ambient.ring.field.one
        return [{c: one} for c in self.cobasis]


def quotient(S, maxdeg=None):
    """Cobasis (non-pivot coordinates of total degree <= maxdeg) and Hilbert
    function of ambient/S restricted to that block."""
    amb = S.ambient
    rows = S.ech.rows
    cob = []
    hil = {}
    top = -1
    for c in amb.columns:
        d = amb.degree(c)
        if maxdeg is not None and d > maxdeg:
            continue
        top = max(top, d)
        if c not in rows:
            cob.append(c)
            hil[d] = hil.get(d, 0) + 1
    h = [hil.get(i, 0) for i in range(top + 1)]
    while h and h[-1] == 0:
        h.pop()
    return QuotientData(len(cob), cob, h, amb)


def subspace_sum(S1, S2):
    S1._check(S2.ambient)
    ech = S1.ech.copy() if not S1.ech.track else _untracked(S1.ech)
    for v in S2.ech.rows.values():
        ech.insert(v)
    return Subspace(S1.ambient, ech)


def _untracked(ech):
    e = Echelon(ech.field)
    e.rows = {k: dict(v) for k, v in ech.rows.items()}
    e._reduced = ech._reduced
    return e


class Ideal:
    """Ideal of the scalar ring given by generators (jets)."""

    def __init__(self, ring, gens, name=None):
        self.ring = ring
        self.gens = [g for g in gens if not g.is_zero()]
        self.name = name

    @classmethod
    def max_power(cls, ring, d):
        """m^d (source variables only); m^0 = R."""
        if d <= 0:
            return cls(ring, [ring.one()], name="R")
        gens = [ring.monomial(m) for m in ring.order
                if ring.xdeg[m] == d and ring.tdeg[m] == 0]
        return cls(ring, gens, name="m^%d" % d)

    def times(self, other):
        gens = [a * b for a in self.gens for b in other.gens]
        return Ideal(self.ring, gens)

    def subspace(self, ambient=None):
        amb = ambient or Ambient(self.ring, 1)
        mons = [self.ring.monomial(m) for m in self.ring.standard]
        return span([(m * g,) for g in self.gens for m in mons], amb)

    def __repr__(self):
        return self.name or "Ideal(%s)" % ", ".join(str(g) for g in self.gens)


def subspace_multiply(S, I):
    """I.S: I an Ideal (generators) or an ideal Subspace of the scalar ring.

    With generators, S is assumed to be a module (closed under the ring), so
    products with generators suffice; with a Subspace all basis products are
    taken."""
    amb = S.ambient
    ring = amb.ring
    if isinstance(I, Subspace):
        if I.ambient.p != 1 or I.ambient.ring is not ring:
            raise ContextMismatch("ideal must be a subspace of the scalar ring")
        mults = [I.ambient.jets(v)[0] for v in I.basis]
    else:
        if I.ring is not ring:
            raise ContextMismatch("ideal from a different ring")
        mults = I.gens
    basis = [amb.jets(v) for v in S.basis]
    vecs = []
    for m in mults:
        for b in basis:
            vecs.append(tuple(m * c for c in b))
    return span(vecs, amb)
