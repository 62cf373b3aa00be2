"""Independent oracles built on sympy (dense linear algebra, no shared code
with the kernel)."""

from itertools import product

import sympy as sp
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix


def _monos(n, d):
    return [e for e in product(range(d + 1), repeat=n) if sum(e) <= d]


def ideal_colength(gens, xs, K, p=0):
    """dim k[x]/(I + m^K) by a dense rank computation."""
    n = len(xs)
    dom = GF(p) if p else QQ
    cols = sorted(_monos(n, K - 1), key=lambda e: (sum(e), [-a for a in e]))
    idx = {e: i for i, e in enumerate(cols)}
    rows = []
    for g in gens:
        g = sp.Poly(g, *xs)
        for m in cols:
            h = g * sp.Poly(sp.prod([x ** a for x, a in zip(xs, m)]), *xs)
            row = [dom.zero] * len(cols)
            for e, c in h.terms():
                if e in idx:
                    row[idx[e]] = dom.convert(c)
            rows.append(row)
    if not rows:
        return len(cols)
    M = DomainMatrix(rows, (len(rows), len(cols)), dom)
    return len(cols) - M.rank()


def tjurina_oracle(f, xs, K, p=0):
    """tau(f) = dim k[x]/((f) + Jac f); exact once the ideal contains m^(K-1)."""
    gens = [f] + [sp.diff(f, x) for x in xs]
    if p:
        gens = [sp.Poly(g, *xs, modulus=p).as_expr() for g in gens]
    return ideal_colength(gens, xs, K, p)
