"""Session-script parser.

    field Q | field F p
    vars x y [mod poly, poly]
    map f = (poly, ...)
    unfolding F params t = (poly, ...)
    jetdeg D | tdeg T | tmax T | group R|K|A [level j]

Polynomials have integer coefficients, + - * ^ and parentheses. One
statement per line; '#' starts a comment.
"""

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import DSLError
from .field import FieldSpec, is_prime

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


@dataclass
class MapDecl:
    name: str
    polys: list          # dicts exps(over xvars) -> Fraction
    line: int


@dataclass
class UnfoldingDecl:
    name: str
    params: tuple
    polys: list          # dicts exps(over xvars + params) -> Fraction
    base: str
    line: int


@dataclass
class Session:
    field: FieldSpec = None
    xvars: tuple = ()
    relations: list = dc_field(default_factory=list)
    maps: dict = dc_field(default_factory=dict)
    unfoldings: dict = dc_field(default_factory=dict)
    order: list = dc_field(default_factory=list)     # declaration order of names
    jetdeg: int = None
    tdeg: int = None
    tmax: int = None
    group: str = None
    level: int = None


def _tokens(text, line, col0=0):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(0) + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1):
            out.append(("int", int(m.group(1)), col0 + start + 1))
        elif m.group(2):
            out.append(("id", m.group(2), col0 + start + 1))
        else:
            out.append(("op", m.group(3), col0 + start + 1))
        pos = m.end(0)
    out.append(("end", None, col0 + len(text) + 1))
    return out


class _Poly:
    """Recursive-descent reader of one polynomial list."""

    def __init__(self, toks, line, names):
        self.toks = toks
        self.i = 0
        self.line = line
        self.names = list(names)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise DSLError(msg, self.line, tok[2])

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.error("expected %r" % op, t)
        return t

    def expr(self):
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = self.take()[1]
            rhs = self.term()
            acc = _add(acc, rhs if sign == "+" else _scale(rhs, -1))
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = _mul(acc, self.unary())
        return acc

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = self.take()[1]
            v = self.unary()
            return v if sign == "+" else _scale(v, -1)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "int":
                self.error("exponent must be a non-negative integer", t)
            out = {(0,) * len(self.names): Fraction(1)}
            for _ in range(t[1]):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        t = self.take()
        nv = len(self.names)
        if t[0] == "int":
            return {(0,) * nv: Fraction(t[1])} if t[1] else {}
        if t[0] == "id":
            if t[1] not in self.names:
                self.error("undeclared variable %r" % t[1], t)
            e = [0] * nv
            e[self.names.index(t[1])] = 1
            return {tuple(e): Fraction(1)}
        if t[0] == "op" and t[1] == "(":
            v = self.expr()
            self.expect(")")
            return v
        self.error("unexpected %s" % ("end of line" if t[0] == "end" else repr(t[1])), t)

    def poly_list(self, parens):
        out = []
        if parens:
            self.expect("(")
        out.append(self.expr())
        while self.peek()[0] == "op" and self.peek()[1] == ",":
            self.take()
            out.append(self.expr())
        if parens:
            self.expect(")")
        if self.peek()[0] != "end":
            self.error("trailing input")
        return out


def _add(a, b):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _scale(a, s):
    return {e: c * s for e, c in a.items()}


def _mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _reduce(poly, fld):
    """Coefficients mapped into the field (zeros dropped)."""
    out = {}
    for e, c in poly.items():
        v = fld(c)
        if v:
            out[e] = v
    return out


def parse(text):
    s = Session()
    last_map = None
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body, ln)
        if toks[0][0] == "end":
            continue
        kw = toks[0]
        if kw[0] != "id":
            raise DSLError("expected a statement keyword", ln, kw[2])
        P = _Poly(toks, ln, ())
        P.i = 1
        k = kw[1]
        if k == "field":
            t = P.take()
            if t[0] != "id" or t[1] not in ("Q", "F"):
                P.error("expected Q or F <prime>", t)
            if t[1] == "Q":
                s.field = FieldSpec(0)
            else:
                q = P.take()
                if q[0] != "int":
                    P.error("expected field modulus", q)
                if not is_prime(q[1]) or q[1] >= 2 ** 31:
                    raise DSLError("field modulus %d is not a prime below 2^31" % q[1], ln, q[2])
                s.field = FieldSpec(q[1])
            if P.peek()[0] != "end":
                P.error("trailing input")
        elif k == "vars":
            if s.field is None:
                raise DSLError("field must precede vars", ln, kw[2])
            if s.xvars:
                raise DSLError("vars declared twice", ln, kw[2])
            names = []
            while P.peek()[0] == "id" and P.peek()[1] != "mod":
                t = P.take()
                if t[1] in names:
                    P.error("duplicate variable %r" % t[1], t)
                names.append(t[1])
            if not names:
                P.error("expected variable names")
            s.xvars = tuple(names)
            if P.peek()[0] == "id":
                P.take()
                P.names = names
                for g in P.poly_list(parens=False):
                    g = _reduce(g, s.field)
                    if not g or min(sum(e) for e in g) < 2:
                        raise DSLError("quotient generator of order < 2", ln, kw[2])
                    s.relations.append(g)
            elif P.peek()[0] != "end":
                P.error("trailing input")
        elif k in ("map", "unfolding"):
            if not s.xvars:
                raise DSLError("vars must precede %s" % k, ln, kw[2])
            t = P.take()
            if t[0] != "id":
                P.error("expected a name", t)
            name = t[1]
            if name in s.maps or name in s.unfoldings or name in s.xvars:
                P.error("name %r already used" % name, t)
            params = ()
            if k == "unfolding":
                pk = P.take()
                if pk[0] != "id" or pk[1] != "params":
                    P.error("expected 'params'", pk)
                ps = []
                while P.peek()[0] == "id":
                    pt = P.take()
                    if pt[1] in s.xvars or pt[1] in ps:
                        P.error("parameter %r clashes with a variable" % pt[1], pt)
                    ps.append(pt[1])
                if not ps:
                    P.error("expected parameter names")
                params = tuple(ps)
            P.expect("=")
            P.names = list(s.xvars) + list(params)
            polys = [_reduce(g, s.field) for g in P.poly_list(parens=True)]
            if k == "map":
                s.maps[name] = MapDecl(name, polys, ln)
                last_map = name
            else:
                if last_map is None:
                    raise DSLError("unfolding needs a declared map", ln, kw[2])
                n = len(s.xvars)
                base = s.maps[last_map].polys
                at0 = [{e[:n]: c for e, c in g.items() if not any(e[n:])} for g in polys]
                if at0 != base:
                    raise DSLError("unfolding does not restrict to map %r at t = 0" % last_map, ln, kw[2])
                s.unfoldings[name] = UnfoldingDecl(name, params, polys, last_map, ln)
            s.order.append(name)
        elif k in ("jetdeg", "tdeg", "tmax"):
            t = P.take()
            if t[0] != "int" or t[1] < 1:
                P.error("expected a positive integer", t)
            setattr(s, k, t[1])
            if P.peek()[0] != "end":
                P.error("trailing input")
        elif k == "group":
            t = P.take()
            if t[0] != "id" or t[1] not in ("R", "K", "A"):
                P.error("expected R, K or A", t)
            s.group = t[1]
            if P.peek()[0] == "id" and P.peek()[1] == "level":
                P.take()
                sign = 1
                if P.peek()[0] == "op" and P.peek()[1] == "-":
                    P.take()
                    sign = -1
                lv = P.take()
                if lv[0] != "int" or sign * lv[1] < -1:
                    P.error("expected a level >= -1", lv)
                s.level = sign * lv[1]
            if P.peek()[0] != "end":
                P.error("trailing input")
        else:
            raise DSLError("unknown statement %r" % k, ln, kw[2])
    if s.field is None:
        raise DSLError("missing field declaration", 1, 1)
    return s
