"""Ideal-inclusion conditions of Mather-Yau type and the associated
algebra fingerprints."""

from dataclasses import dataclass

from .errors import Refusal
from .jets import INFINITE, UnfoldingMap, embed, jet_partial, ord_
from .linsub import Ambient, Ideal, QuotientData, quotient, span
from .tangent import as_spec, tangent_generators, tangent_space, target_monomials
from .unfolding import separability


@dataclass
class ConditionSpec:
    group: str
    ideal: Ideal

    def __post_init__(self):
        if self.group not in ("R", "K", "A"):
            raise ValueError("condition group must be R, K or A")


@dataclass
class ConditionResult:
    holds: bool
    failing: str = None     # a left-side generator not in the right side
    exact: bool = False     # right side saturated below D (module case)

    def __bool__(self):
        return self.holds


def _mul_vecs(mults, vecs):
    return [tuple(m * c for c in v) for m in mults for v in vecs]


def condition_check(f, spec):
    ring = f.ring
    if f.is_zero():
        raise Refusal("refused: f = 0")
    o = ord_(f)
    e = max(o - 2, 0)
    a = spec.ideal
    p = f.p
    amb = Ambient(ring, p, xmax=ring.D - 1)
    zero = ring.zero()
    # left side: a^2 m^{ord-2} R^p
    a2 = a.times(a).times(Ideal.max_power(ring, e))
    lhs = []
    for g in a2.gens:
        for l in range(p):
            v = [zero] * p
            v[l] = g
            lhs.append(tuple(v))
    xs = [ring.var(v) for v in ring.xvars]
    TR = [v for _, v in tangent_generators(f, "R")]
    aTR = _mul_vecs(a.gens, TR)
    if spec.group == "K":
        rhs = _mul_vecs(xs, aTR)
        for m in ring.standard:
            if ring.xdeg[m] >= 1:
                mj = ring.monomial(m)
                for c in f.components:
                    for l in range(p):
                        v = [zero] * p
                        v[l] = mj * c
                        rhs.append(tuple(v))
        module = True
    elif spec.group == "R":
        rhs = _mul_vecs(xs, aTR)
        module = True
    else:
        rhs = list(aTR)
        for beta, val in target_monomials(f, 2):
            for l in range(p):
                v = [zero] * p
                v[l] = val
                rhs.append(tuple(v))
        module = False
        # left side is not tested against a module: use all monomial multiples
        lhs = [tuple(ring.monomial(m) * c for c in v) for v in lhs for m in ring.standard]
    S = span(rhs, amb)
    for v in lhs:
        vec = amb.vec(v)
        if not S.contains(vec):
            return ConditionResult(False, amb.vec_str(vec), _saturated(S, module))
    return ConditionResult(True, None, _saturated(S, module))


def _saturated(S, module):
    if not module:
        return False
    q = quotient(S)
    D = S.ambient.ring.D
    return len(q.hilbert) < D


def algebra_fingerprint(f, spec):
    """Dimension/Hilbert function of k[x]/((f) + a.Jac f) (K shape),
    k[x]/(a.Jac f) (R shape) or k[x]/((f_1..f_p) + a^2) (A shape)."""
    ring = f.ring
    a = spec.ideal
    if spec.group == "A":
        gens = list(f.components) + a.times(a).gens
    else:
        if f.p != 1 or ring.has_relations:
            raise Refusal("refused: unsupported shape (only p = 1, J = 0; general a_R is not defined)")
        jac = Ideal(ring, [jet_partial(f[0], v) for v in ring.xvars])
        gens = a.times(jac).gens
        if spec.group == "K":
            gens = [f[0]] + gens
    amb = Ambient(ring, 1, xmax=ring.D - 1)
    S = Ideal(ring, gens).subspace(amb)
    q = quotient(S)
    if len(q.hilbert) < ring.D:
        q.certified = True
        q.certificate_degree = len(q.hilbert)
        q.evidence = "certified"
    return q


def ideal_from_token(ring, token):
    """'m^d' (also 'm', 'R') or a list of jets."""
    if isinstance(token, Ideal):
        return token
    if isinstance(token, str):
        t = token.strip().replace(" ", "")
        if t in ("R", "m^0", "1"):
            return Ideal.max_power(ring, 0)
        if t == "m":
            return Ideal.max_power(ring, 1)
        if t.startswith("m^"):
            return Ideal.max_power(ring, int(t[2:]))
        raise ValueError("unknown ideal token %r" % token)
    return Ideal(ring, list(token))


def corollary_trivial_check(F, spec="K"):
    spec = as_spec(spec)
    if spec.group not in ("K", "A"):
        raise Refusal("refused: triviality comparison defined for K and A")
    p = F.ring.field.characteristic
    if p:
        if F.ring.r != 1:
            raise Refusal("refused: separability defined for one parameter")
        v = separability(F, spec)
        if v.kind == "Inseparable":
            raise Refusal("refused: unfolding is inseparable (%s)" % v)
    const = UnfoldingMap(F.ring, [embed(c, F.ring) for c in F.base.components])
    return tangent_space(F, spec, reliable=True) == tangent_space(const, spec, reliable=True)
