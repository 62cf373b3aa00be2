"""Truncated local rings k[[x, t]] / (J + truncation) and their elements.

Monomials are packed into ints (exponent e_i is the i-th digit in base
`ring.base`) so that multiplying monomials is integer addition and the bound
check is a dict lookup.  Variables are ordered x_1..x_n, t_1..t_r.

Truncation ideal: (x)^{D+1} + (t)^{T+1}, plus optionally (x, t)^{W+1}
("total" bound).  The total bound is preserved by every substitution whose
images have order >= 1 in (x, t), which the separate bounds are not when an
image carries a pure-t term.
"""

from itertools import product as iproduct

from .echelon import Echelon
from .errors import ContextMismatch, Refusal
from .field import FieldSpec


class _Infinite:
    """Order of the zero germ."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = object.__new__(cls)
        return cls._inst

    def __repr__(self):
        return "infinite"

    __str__ = __repr__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITE = _Infinite()


def mono_key(exps):
    # local order: degree ascending, then lex with x_1 heaviest first
    return (sum(exps), tuple(-e for e in exps))


def _exps_upto(nv, D):
    """All exponent tuples in nv variables with total degree <= D."""
    if nv == 0:
        return [()]
    out = []
    for e0 in range(D + 1):
        for rest in _exps_upto(nv - 1, D - e0):
            out.append((e0,) + rest)
    return out


_RING_CACHE = {}


class JetRing:
    """The jet-ring context: field, variables, degree bounds, quotient ideal J."""

    def __new__(cls, field, xvars, tvars=(), D=8, T=0, relations=(), total=None):
        xvars = tuple(xvars)
        tvars = tuple(tvars)
        if not tvars:
            T = 0
        rel_key = tuple(tuple(sorted(r.items())) for r in relations)
        key = (field, xvars, tvars, D, T, rel_key, total)
        hit = _RING_CACHE.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self._init(field, xvars, tvars, D, T, [dict(r) for r in relations], total)
        self._key = key
        _RING_CACHE[key] = self
        return self

    def _init(self, field, xvars, tvars, D, T, relations, total):
        if not isinstance(field, FieldSpec):
            raise TypeError("field must be a FieldSpec")
        if D < 1:
            raise ValueError("degree bound D must be >= 1")
        if len(set(xvars + tvars)) != len(xvars + tvars):
            raise ValueError("duplicate variable names")
        self.field = field
        self.xvars = xvars
        self.tvars = tvars
        self.n = len(xvars)
        self.r = len(tvars)
        self.nv = self.n + self.r
        self.D = D
        self.T = T
        self.W = total
        self.vars = xvars + tvars
        self.var_index = {v: i for i, v in enumerate(self.vars)}
        top = max(D, T, total or 0, 1)
        self.base = B = 2 * top + 2
        self.var_weight = [B ** (self.nv - 1 - i) for i in range(self.nv)]

        exps_all = []
        for ex in _exps_upto(self.n, D):
            for et in _exps_upto(self.r, T):
                e = ex + et
                if total is not None and sum(e) > total:
                    continue
                exps_all.append(e)
        exps_all.sort(key=mono_key)
        self.exps = {}       # packed -> tuple
        self.pos = {}        # packed -> position in local order
        self.order = []      # packed monomials in local order
        for i, e in enumerate(exps_all):
            m = self.pack(e)
            self.exps[m] = e
            self.pos[m] = i
            self.order.append(m)
        self.xdeg = {m: sum(e[: self.n]) for m, e in self.exps.items()}
        self.tdeg = {m: sum(e[self.n:]) for m, e in self.exps.items()}
        self.deg = {m: sum(e) for m, e in self.exps.items()}
        self.one_mono = 0

        # quotient ideal J (generators in x only, as exps(len n) -> int/scalar)
        self.relation_polys = tuple(
            {tuple(e): field(c) for e, c in r.items() if field(c)} for r in relations
        )
        self.nf = {}
        self.relations = ()
        if self.relation_polys:
            self._build_quotient()
        self.standard = [m for m in self.order if m not in self.nf]

    # ---- monomial plumbing
    def pack(self, exps):
        return sum(e * w for e, w in zip(exps, self.var_weight))

    def var_mono(self, name):
        return self.var_weight[self.var_index[name]]

    def __repr__(self):
        s = "JetRing(%r, x=%s" % (self.field, ",".join(self.xvars))
        if self.tvars:
            s += ", t=%s, T=%d" % (",".join(self.tvars), self.T)
        s += ", D=%d" % self.D
        if self.W is not None:
            s += ", W=%d" % self.W
        if self.relation_polys:
            s += ", J=%d gens" % len(self.relation_polys)
        return s + ")"

    def __reduce__(self):
        rels = [dict(r) for r in self.relation_polys]
        return (JetRing, (self.field, self.xvars, self.tvars, self.D, self.T, rels, self.W))

    @property
    def jet0_guaranteed(self):
        return self.field.characteristic == 0 or not self.relation_polys

    @property
    def has_relations(self):
        return bool(self.relation_polys)

    def with_bounds(self, D=None, T=None, total="same", tvars=None, xvars=None):
        return JetRing(self.field,
                       self.xvars if xvars is None else xvars,
                       self.tvars if tvars is None else tvars,
                       self.D if D is None else D,
                       self.T if T is None else T,
                       [dict(r) for r in self.relation_polys],
                       self.W if total == "same" else total)

    def germ_ring(self):
        """The ring in the x variables only (t dropped)."""
        if not self.tvars and self.W is None:
            return self
        return JetRing(self.field, self.xvars, (), self.D, 0,
                       [dict(r) for r in self.relation_polys], None)

    def family_ring(self, tvars, T, total=None):
        return JetRing(self.field, self.xvars, tuple(tvars), self.D, T,
                       [dict(r) for r in self.relation_polys], total)

    # ---- quotient ideal
    def _build_quotient(self):
        n, F = self.n, self.field
        # the ideal subspace in the x-monomials of this ring
        xmonos = [m for m in self.order if self.tdeg[m] == 0]
        gens = []
        for r in self.relation_polys:
            if any(sum(e) < 2 for e in r):
                raise ValueError("quotient generator of order < 2")
            if any(len(e) != n for e in r):
                raise ValueError("quotient generator must involve source variables only")
            gens.append({self.pack(e + (0,) * self.r): c for e, c in r.items()
                         if self.pack(e + (0,) * self.r) in self.exps})
        ech = Echelon(F)
        pos = self.pos
        p = F.characteristic
        for g in gens:
            for m in xmonos:
                vec = {}
                for gm, c in g.items():
                    mm = gm + m
                    if mm in pos:
                        vec[pos[mm]] = c
                if vec:
                    ech.insert(vec)
        ech.rref()
        order = self.order
        xnf = {}
        for piv, row in ech.rows.items():
            m = order[piv]
            nf = {}
            for col, c in row.items():
                if col != piv:
                    nf[order[col]] = (-c) % p if p else -c
            xnf[m] = nf
        # spread over t-monomials
        tmonos = [m for m in self.order if self.xdeg[m] == 0]
        for xm, nf in xnf.items():
            for tm in tmonos:
                mm = xm + tm
                if mm not in pos:
                    continue
                self.nf[mm] = {a + tm: c for a, c in nf.items() if a + tm in pos}
        self._ideal_rows = ech
        # closure check: row * variable reduces to zero
        for piv, row in ech.rows.items():
            for i in range(n):
                w = self.var_weight[i]
                prod_terms = {}
                for col, c in row.items():
                    mm = order[col] + w
                    if mm in pos:
                        prod_terms[mm] = c
                if self._reduce_terms(prod_terms):
                    raise AssertionError("ideal subspace not closed under multiplication")
        self.relations = tuple(Jet(self, {}) for _ in self.relation_polys)

    def _reduce_terms(self, terms):
        """Canonical form of a term dict (keys in-bounds packed monomials)."""
        nf = self.nf
        if not nf:
            return terms
        p = self.field.characteristic
        out = {}
        for m, c in terms.items():
            red = nf.get(m)
            if red is None:
                v = out.get(m, 0) + c
                if p:
                    v %= p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
            else:
                for mm, d in red.items():
                    v = out.get(mm, 0) + c * d
                    if p:
                        v %= p
                    if v:
                        out[mm] = v
                    else:
                        out.pop(mm, None)
        return out

    # ---- constructors
    def jet(self, terms=None, names=None):
        """Jet from {exps-tuple or packed-int: coefficient}. `names` gives the
        variable order of exps tuples when they differ from the ring's."""
        out = {}
        F = self.field
        if terms:
            idx = None
            if names is not None:
                idx = [self.var_index[v] for v in names]
            for e, c in terms.items():
                if isinstance(e, int):
                    m = e
                    if m not in self.exps:
                        continue
                else:
                    if idx is not None:
                        full = [0] * self.nv
                        for i, a in zip(idx, e):
                            full[i] = a
                        e = tuple(full)
                    if len(e) != self.nv:
                        raise ValueError("exponent vector of wrong length")
                    if any(a < 0 for a in e):
                        raise ValueError("negative exponent")
                    xd = sum(e[: self.n])
                    td = sum(e[self.n:])
                    if xd > self.D or td > self.T or (self.W is not None and xd + td > self.W):
                        continue
                    m = self.pack(e)
                c = F(c)
                if c:
                    v = F.add(out.get(m, F.zero), c)
                    if v:
                        out[m] = v
                    else:
                        out.pop(m, None)
        return Jet(self, self._reduce_terms(out))

    def zero(self):
        return Jet(self, {})

    def one(self):
        return Jet(self, {0: self.field.one})

    def const(self, c):
        c = self.field(c)
        return Jet(self, {0: c} if c else {})

    def var(self, name):
        if name not in self.var_index:
            raise KeyError("unknown variable %r" % name)
        m = self.var_mono(name)
        return Jet(self, {m: self.field.one} if m in self.exps else {})

    def monomial(self, m):
        return Jet(self, self._reduce_terms({m: self.field.one}))

    def convert(self, jet):
        """Re-express a jet of another ring (variables matched by name)."""
        if jet.ring is self:
            return jet
        src = jet.ring
        for v in src.vars:
            if v not in self.var_index:
                raise ContextMismatch("variable %r not in target ring" % v)
        return self.jet({src.exps[m]: c for m, c in jet.terms.items()}, names=src.vars)

    def mono_str(self, m):
        e = self.exps[m]
        parts = []
        for v, a in zip(self.vars, e):
            if a == 1:
                parts.append(v)
            elif a > 1:
                parts.append("%s^%d" % (v, a))
        return "*".join(parts) if parts else "1"


class Jet:
    """Element of a JetRing in canonical form. Treat as immutable."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # arithmetic
    def _check(self, other):
        if not isinstance(other, Jet):
            return self.ring.const(other)
        if other.ring is not self.ring:
            raise ContextMismatch("jets from different rings: %r vs %r" % (self.ring, other.ring))
        return other

    def __add__(self, other):
        other = self._check(other)
        p = self.ring.field.characteristic
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if p:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Jet(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.characteristic
        if p:
            return Jet(self.ring, {m: (-c) % p for m, c in self.terms.items()})
        return Jet(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        F = self.ring.field
        c = F(c)
        if not c:
            return Jet(self.ring, {})
        p = F.characteristic
        if p:
            return Jet(self.ring, {m: a * c % p for m, a in self.terms.items()})
        return Jet(self.ring, {m: a * c for m, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self.scale(other)
        other = self._check(other)
        return Jet(self.ring, self.ring._reduce_terms(_mul_terms(self.ring, self.terms, other.terms)))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, Jet):
            if other == 0:
                return not self.terms
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.ring), frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def coeff(self, exps):
        return self.terms.get(self.ring.pack(exps), self.ring.field.zero)

    def constant_term(self):
        return self.terms.get(0, self.ring.field.zero)

    def sorted_terms(self):
        pos = self.ring.pos
        return sorted(self.terms.items(), key=lambda mc: pos[mc[0]])

    def __str__(self):
        return jet_str(self)

    def __repr__(self):
        return "Jet(%s)" % jet_str(self)

    # degree data
    def xorder(self):
        if not self.terms:
            return INFINITE
        xd = self.ring.xdeg
        return min(xd[m] for m in self.terms)

    def order(self):
        if not self.terms:
            return INFINITE
        d = self.ring.deg
        return min(d[m] for m in self.terms)


def _mul_terms(ring, a, b):
    p = ring.field.characteristic
    pos = ring.pos
    out = {}
    if len(a) > len(b):
        a, b = b, a
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma + mb
            if m in pos:
                v = get(m, 0) + ca * cb
                if p:
                    v %= p
                if v:
                    out[m] = v
                else:
                    del out[m]
    return out


def jet_str(f):
    ring = f.ring
    if not f.terms:
        return "0"
    parts = []
    for m, c in f.sorted_terms():
        ms = ring.mono_str(m)
        cs = str(c)
        neg = False
        if ring.field.characteristic == 0 and c < 0:
            neg = True
            cs = str(-c)
        if ms == "1":
            body = cs
        elif cs == "1":
            body = ms
        else:
            body = cs + "*" + ms
        if "/" in cs and ms != "1":
            body = "(%s)*%s" % (cs, ms)
        parts.append(("- " if neg else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


# ---------------------------------------------------------------- operations

def jet_mul(a, b):
    if a.ring is not b.ring:
        raise ContextMismatch("jet_mul: different rings")
    return a * b


def jet_partial(f, var):
    """Formal partial derivative of the canonical representative."""
    ring = f.ring
    if var not in ring.var_index:
        raise KeyError("unknown variable %r" % var)
    i = ring.var_index[var]
    w = ring.var_weight[i]
    p = ring.field.characteristic
    out = {}
    for m, c in f.terms.items():
        e = ring.exps[m][i]
        if e == 0:
            continue
        v = c * e
        if p:
            v %= p
        if v:
            out[m - w] = v
    return Jet(ring, ring._reduce_terms(out))


def jet_substitute(f, assignment):
    """Replace variables by jets (images must have order >= 1 in (x, t))."""
    ring = f.ring
    images = {}
    for v, img in assignment.items():
        if v not in ring.var_index:
            raise KeyError("unknown variable %r" % v)
        if img.ring is not ring:
            raise ContextMismatch("substitution image from a different ring")
        if img.constant_term():
            raise ValueError("substitution image for %r has a nonzero constant term" % v)
        images[ring.var_index[v]] = img
    idx = sorted(images)
    if not idx or f.is_zero():
        return f
    return _subst(ring, f.terms, idx, images)


def _subst(ring, terms, idx, images):
    # Horner-type recursion over substituted variables: group by exponent of
    # the first substituted variable, recurse, then combine with its powers.
    if not idx:
        return Jet(ring, ring._reduce_terms(dict(terms)))
    i = idx[0]
    w = ring.var_weight[i]
    groups = {}
    for m, c in terms.items():
        e = ring.exps[m][i]
        groups.setdefault(e, {})[m - e * w] = c
    img = images[i]
    top = max(groups)
    # Horner: (((g_top) * img + g_{top-1}) * img + ...)
    acc = None
    for e in range(top, -1, -1):
        g = groups.get(e)
        part = _subst(ring, g, idx[1:], images) if g else None
        if acc is None:
            acc = part if part is not None else ring.zero()
        else:
            acc = acc * img
            if part is not None:
                acc = acc + part
    return acc


def ord_(f):
    """Minimal x-degree over all nonzero terms (INFINITE for zero)."""
    if isinstance(f, GermMap):
        comps = f.components
    elif isinstance(f, UnfoldingMap):
        comps = f.components
    elif isinstance(f, Jet):
        comps = [f]
    else:
        comps = list(f)
    best = INFINITE
    for c in comps:
        o = c.xorder()
        if o is not INFINITE and (best is INFINITE or o < best):
            best = o
    return best


# ---------------------------------------------------------------- maps

class GermMap:
    """f = (f_1, ..., f_p) with every component in m = (x).

    `polys` optionally keeps the exact defining polynomials (dicts keyed by
    exponent tuples over `ring.vars`) so the germ can be re-read at a larger
    degree bound without truncation loss."""

    def __init__(self, ring, components, polys=None, check=True):
        components = tuple(components)
        if not components:
            raise ValueError("a map needs at least one component")
        for c in components:
            if c.ring is not ring:
                raise ContextMismatch("component from a different ring")
            if check and c.constant_term():
                raise ValueError("component has nonzero constant term: not a germ at the origin")
        self.ring = ring
        self.components = components
        self.polys = polys

    @classmethod
    def from_polys(cls, ring, polys, names=None):
        names = names or ring.vars
        polys = [dict(pp) for pp in polys]
        comps = [ring.jet(pp, names=names) for pp in polys]
        full = [{tuple(_reorder(e, names, ring.vars)): c for e, c in pp.items()} for pp in polys]
        return cls(ring, comps, polys=full)

    @property
    def p(self):
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, GermMap) and self.ring is other.ring and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "GermMap(%s)" % ", ".join(str(c) for c in self.components)

    def lift(self, ring):
        """Same map in a ring with the same variables but other bounds."""
        if ring is self.ring:
            return self
        if self.polys is not None:
            comps = [ring.jet(pp, names=self.ring.vars) for pp in self.polys]
            return GermMap(ring, comps, polys=self.polys)
        return GermMap(ring, [ring.convert(c) for c in self.components])

    def is_zero(self):
        return all(c.is_zero() for c in self.components)


class UnfoldingMap:
    """F(x, t) = (f_t(x), t): components f_t in a ring with parameters."""

    def __init__(self, ring, components, polys=None, base=None):
        components = tuple(components)
        for c in components:
            if c.ring is not ring:
                raise ContextMismatch("component from a different ring")
            if c.constant_term():
                raise ValueError("component has nonzero constant term")
        self.ring = ring
        self.components = components
        self.polys = polys
        g = ring.germ_ring()
        comps0 = [restrict_t0(c, g) for c in components]
        if base is None:
            base_polys = None
            if polys is not None:
                n = ring.n
                base_polys = [{e[:n]: c for e, c in pp.items() if not any(e[n:])} for pp in polys]
            base = GermMap(g, comps0, polys=base_polys)
        else:
            if base.ring is not g:
                base = base.lift(g)
            if tuple(comps0) != base.components:
                raise ValueError("unfolding does not restrict to its base at t = 0")
        self.base = base

    @classmethod
    def from_polys(cls, ring, polys, names=None):
        names = names or ring.vars
        comps = [ring.jet(dict(pp), names=names) for pp in polys]
        full = [{tuple(_reorder(e, names, ring.vars)): c for e, c in pp.items()} for pp in polys]
        return cls(ring, comps, polys=full)

    @classmethod
    def constant(cls, f, tvars=("t",), T=None):
        ring = f.ring.family_ring(tvars, T if T is not None else 2 * f.ring.D)
        polys = None
        if f.polys is not None:
            polys = [{e + (0,) * len(tvars): c for e, c in pp.items()} for pp in f.polys]
        return cls(ring, [ring.convert(c) for c in f.components], polys=polys)

    @property
    def p(self):
        return len(self.components)

    @property
    def r(self):
        return self.ring.r

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __repr__(self):
        return "UnfoldingMap(%s; %s)" % (", ".join(str(c) for c in self.components), ",".join(self.ring.tvars))

    def lift(self, ring):
        if ring is self.ring:
            return self
        if self.polys is not None:
            comps = [ring.jet(pp, names=self.ring.vars) for pp in self.polys]
            return UnfoldingMap(ring, comps, polys=self.polys)
        return UnfoldingMap(ring, [ring.convert(c) for c in self.components])


def _reorder(e, names, target):
    d = dict(zip(names, e))
    for k in d:
        if k not in target:
            raise KeyError("unknown variable %r" % k)
    return tuple(d.get(v, 0) for v in target)


def restrict_t0(f, germ_ring=None):
    """Set all parameters to zero."""
    ring = f.ring
    g = germ_ring or ring.germ_ring()
    n = ring.n
    terms = {}
    for m, c in f.terms.items():
        if ring.tdeg[m] == 0:
            terms[ring.exps[m][:n]] = c
    return g.jet(terms)


def t_coefficients(f):
    """Split a family jet into {t-exponent tuple: x-jet in the germ ring}."""
    ring = f.ring
    g = ring.germ_ring()
    n = ring.n
    buckets = {}
    for m, c in f.terms.items():
        e = ring.exps[m]
        buckets.setdefault(e[n:], {})[e[:n]] = c
    return {te: g.jet(tt) for te, tt in buckets.items()}


def embed(fx, ring, tmono=None):
    """x-jet (germ ring) times the t-monomial `tmono` (exponent tuple) in a family ring."""
    tmono = tmono or (0,) * ring.r
    src = fx.ring
    return ring.jet({src.exps[m][: src.n] + tuple(tmono): c for m, c in fx.terms.items()})


def random_jet(ring, rng, density=0.5, maxdeg=None, coeff_range=3, min_order=0):
    """Random jet (for property tests)."""
    out = {}
    F = ring.field
    for m in ring.standard:
        d = ring.deg[m]
        if d < min_order or (maxdeg is not None and d > maxdeg):
            continue
        if rng.random() < density:
            c = rng.randint(-coeff_range, coeff_range)
            if c:
                out[m] = F(c)
    return Jet(ring, ring._reduce_terms(out))


def jet_compose(f, images, target):
    """f(images): `images` maps every variable of f.ring that occurs to a jet
    of `target` (order >= 1); unmapped variables must not occur in f."""
    ring = f.ring
    for v, img in images.items():
        if img.ring is not target:
            raise ContextMismatch("image of %r not in the target ring" % v)
        if img.constant_term():
            raise ValueError("image of %r has a nonzero constant term" % v)
    idx = []
    for i, v in enumerate(ring.vars):
        if v in images:
            idx.append(i)
    imgs = {ring.var_index[v]: img for v, img in images.items()}
    mapped = set(idx)
    for m in f.terms:
        e = ring.exps[m]
        if any(a and i not in mapped for i, a in enumerate(e)):
            raise ValueError("unmapped variable occurs in composed jet")
    return _compose(ring, f.terms, idx, imgs, target)


def _compose(ring, terms, idx, imgs, target):
    if not idx:
        c = terms.get(0) if terms else None
        return target.const(c) if c else target.zero()
    i = idx[0]
    w = ring.var_weight[i]
    groups = {}
    for m, c in terms.items():
        e = ring.exps[m][i]
        groups.setdefault(e, {})[m - e * w] = c
    img = imgs[i]
    acc = None
    for e in range(max(groups), -1, -1):
        g = groups.get(e)
        part = _compose(ring, g, idx[1:], imgs, target) if g else None
        if acc is None:
            acc = part if part is not None else target.zero()
        else:
            acc = acc * img
            if part is not None:
                acc = acc + part
    return acc
