"""Command-line front end: parse a session script, run one command, print a
report as text or JSON. Exit codes: 0 ok, 1 refusal, 2 parse error."""

import argparse
import json
import sys

from .errors import DSLError, Refusal
from .dsl import parse
from .jets import INFINITE, GermMap, JetRing, UnfoldingMap, ord_
from .tangent import GroupSpec, t1
from .unfolding import (inf_trivial, inf_versal, k_to_a_transversal, prenormal,
                        separability, versal_construct)
from .stability import der_values_dim, genotype, inf_stable, rank
from .matheryau import ConditionSpec, algebra_fingerprint, condition_check, ideal_from_token

COMMANDS = ("t1", "tjurina", "versal", "rank", "stable", "genotype", "trivial", "separable",
            "prenormal", "transversal", "myau-check", "fingerprint", "derval")


class Context:
    """Session plus resolved options; builds rings and maps on demand."""

    def __init__(self, session, args):
        s = session
        self.s = s
        self.D = args.jet or s.jetdeg or 8
        self.T = args.tdeg or s.tdeg or 2 * self.D
        self.T_max = args.tmax or s.tmax or 2 * self.D
        group = args.group or s.group or "K"
        level = args.level if args.level is not None else (s.level if s.level is not None else -1)
        self.spec = GroupSpec(group, level)
        self.name = args.name

    def ring(self, tvars=()):
        s = self.s
        return JetRing(s.field, s.xvars, tvars, D=self.D, T=self.T if tvars else 0,
                       relations=s.relations)

    def _pick(self, table, what):
        if self.name is not None:
            if self.name not in table:
                raise Refusal("refused: no %s named %r" % (what, self.name))
            return table[self.name]
        if not table:
            raise Refusal("refused: the session declares no %s" % what)
        return table[[n for n in self.s.order if n in table][-1]]

    def germ(self):
        d = self._pick(self.s.maps, "map")
        return d.name, GermMap.from_polys(self.ring(), d.polys, names=self.s.xvars)

    def unfolding(self):
        d = self._pick(self.s.unfoldings, "unfolding")
        ring = self.ring(d.params)
        return d.name, UnfoldingMap.from_polys(ring, d.polys, names=self.s.xvars + d.params)

    def has_unfolding(self):
        if self.name is not None:
            return self.name in self.s.unfoldings
        return bool(self.s.unfoldings)


def _quot(q):
    return {"dim": q.dimension, "cobasis": q.cobasis_str(), "hilbert": list(q.hilbert),
            "certified": q.certified, "certificate_degree": q.certificate_degree,
            "evidence": q.evidence}


def cmd_t1(ctx):
    name, f = ctx.germ()
    q = t1(f, ctx.spec)
    if q.certified:
        summary = "dim %d, certified at N=%d" % (q.dimension, q.certificate_degree)
    elif ctx.spec.group in ("A", "L"):
        summary = "dim %d (jet-level; %s-certificates unavailable)" % (q.dimension, ctx.spec.group)
    else:
        summary = "dim %d (jet-level)" % q.dimension
    return summary, {"map": name, "group": str(ctx.spec), "t1": _quot(q)}


def cmd_tjurina(ctx):
    name, f = ctx.germ()
    if f.p != 1:
        raise Refusal("refused: Tjurina number defined for p = 1")
    q = t1(f, "K")
    if q.certified:
        summary = "tau = %d, certified at N=%d" % (q.dimension, q.certificate_degree)
    else:
        summary = "tau = %d (jet-level)" % q.dimension
    return summary, {"map": name, "tau": q.dimension, "certified": q.certified,
                     "certificate_degree": q.certificate_degree, "cobasis": q.cobasis_str()}


def cmd_versal(ctx):
    if ctx.has_unfolding():
        name, F = ctx.unfolding()
        v = inf_versal(F, ctx.spec)
        summary = ("VERSAL" if v.versal else "NOT VERSAL") + " (dim T1 = %d)" % v.t1_dim
        return summary, {"unfolding": name, "group": str(ctx.spec), "versal": v.versal,
                         "classes": v.classes, "t1_dim": v.t1_dim, "certified": v.certified}
    name, f = ctx.germ()
    G = versal_construct(f, ctx.spec, T=ctx.T)
    comps = [str(c) for c in G.components]
    summary = "versal unfolding with %d parameters: (%s)" % (G.ring.r, ", ".join(comps))
    return summary, {"map": name, "group": str(ctx.spec), "params": list(G.ring.tvars),
                     "components": comps}


def cmd_rank(ctx):
    name, f = ctx.germ()
    r = rank(f)
    return "rank = %d" % r, {"map": name, "rank": r}


def cmd_derval(ctx):
    d = der_values_dim(ctx.ring())
    return "dim Der values = %d" % d, {"der_values_dim": d}


def cmd_stable(ctx):
    name, f = ctx.germ()
    v = inf_stable(f)
    out = {"map": name, "verdict": v.kind, "residue": list(v.residue), "note": v.note}
    if v.genotype is not None and v.genotype.genotype is not None:
        out["genotype"] = [str(c) for c in v.genotype.genotype.components]
    return str(v), out


def cmd_genotype(ctx):
    name, f = ctx.germ()
    g = genotype(f)
    core = [] if g.genotype is None else [str(c) for c in g.genotype.components]
    summary = "genotype (%s)" % ", ".join(core) if core else "genotype empty (submersion)"
    return summary, {"map": name, "genotype": core, "generators": g.generators,
                     "certificate": g.certificate, "matched": g.matched,
                     "params": list(g.params)}


def cmd_trivial(ctx):
    name, F = ctx.unfolding()
    vs = inf_trivial(F, ctx.spec)
    ok = all(v.trivial for v in vs)
    summary = "INFINITESIMALLY TRIVIAL" if ok else "NOT INFINITESIMALLY TRIVIAL"
    params = {}
    for v in vs:
        params[v.param] = {"trivial": v.trivial, "residue": v.residue,
                           "witness": ["%s: %s" % (_label(l), c) for l, c in v.witness]}
    return summary, {"unfolding": name, "group": str(ctx.spec), "trivial": ok, "params": params}


def _label(l):
    return "(" + ",".join(str(x) for x in l) + ")"


def cmd_separable(ctx):
    name, F = ctx.unfolding()
    v = separability(F, ctx.spec, ctx.T_max)
    if v.kind == "TrivialUpTo":
        summary = "TRIVIAL up to t-degree %d" % v.degree
    elif v.kind == "Inseparable":
        summary = "INSEPARABLE at t-degree %d, class = %s" % (v.degree, v.cls)
    else:
        summary = "SEPARABLE obstruction at t-degree %d, class = %s" % (v.degree, v.cls)
    return summary, {"unfolding": name, "group": str(ctx.spec), "kind": v.kind,
                     "degree": v.degree, "class": v.cls, "T_max": ctx.T_max}


def cmd_prenormal(ctx, log=False):
    name, F = ctx.unfolding()
    p = prenormal(F, ctx.spec, ctx.T_max)
    coeffs = {k: p.a_str(k) for k in p.cobasis}
    nz = ["a[%s] = %s" % (k, v) for k, v in coeffs.items() if v != "0"]
    summary = "all a_j = 0" if not nz else "; ".join(nz)
    out = {"unfolding": name, "group": str(ctx.spec), "cobasis": list(p.cobasis),
           "coefficients": coeffs, "T_max": p.T_max, "certified": p.certified}
    if log:
        out["log"] = [g.describe(p.ring.tvars) for g in p.log if not g.is_identity()]
    return summary, out


def cmd_transversal(ctx):
    name, f = ctx.germ()
    q = k_to_a_transversal(f)
    return "transversal dim %d" % q.dimension, {
        "map": name, "dim": q.dimension, "hilbert": list(q.hilbert),
        "generators": [q.ambient.vec_str(v) for v in q.generators]}


def _condspec(ctx, ring, ideal):
    g = ctx.spec.group
    if g not in ("R", "K", "A"):
        raise Refusal("refused: condition defined for R, K, A")
    return ConditionSpec(g, ideal_from_token(ring, ideal))


def cmd_myau(ctx, ideal):
    name, f = ctx.germ()
    r = condition_check(f, _condspec(ctx, f.ring, ideal))
    summary = "HOLDS" if r.holds else "FAILS at %s" % r.failing
    return summary, {"map": name, "group": str(ctx.spec), "ideal": ideal, "holds": r.holds,
                     "failing": r.failing, "exact": r.exact}


def cmd_fingerprint(ctx, ideal):
    name, f = ctx.germ()
    q = algebra_fingerprint(f, _condspec(ctx, f.ring, ideal))
    summary = "algebra dim %d, hilbert %s" % (q.dimension, list(q.hilbert))
    return summary, {"map": name, "group": str(ctx.spec), "ideal": ideal, "dim": q.dimension,
                     "hilbert": list(q.hilbert), "certified": q.certified,
                     "cobasis": q.cobasis_str()}


def run(command, session, args):
    """Report dict {"command", "summary", "result"} for one command."""
    ctx = Context(session, args)
    if command == "prenormal":
        summary, res = cmd_prenormal(ctx, args.log)
    elif command == "myau-check":
        summary, res = cmd_myau(ctx, args.ideal)
    elif command == "fingerprint":
        summary, res = cmd_fingerprint(ctx, args.ideal)
    else:
        summary, res = globals()["cmd_" + command](ctx)
    return {"command": command, "summary": summary, "result": res}


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    if v is INFINITE:
        return "infinite"
    return str(v)


def render_json(report):
    return json.dumps(_jsonable(report), sort_keys=True, indent=2)


def render_text(report, indent=0):
    """Same key tree as the JSON, one field per line."""
    rep = _jsonable(report)
    lines = []
    if indent == 0:
        lines.append(rep["summary"])
        rep = {k: v for k, v in rep.items() if k != "summary"}
    _text_lines(rep, indent, lines)
    return "\n".join(lines)


def _text_lines(d, indent, lines):
    pad = "  " * indent
    for k in sorted(d):
        v = d[k]
        if isinstance(v, dict):
            lines.append("%s%s:" % (pad, k))
            _text_lines(v, indent + 1, lines)
        elif isinstance(v, list):
            lines.append("%s%s: [%s]" % (pad, k, ", ".join(json.dumps(x) if not isinstance(x, str) else x
                                                         for x in v)))
        else:
            lines.append("%s%s: %s" % (pad, k, "null" if v is None else json.dumps(v) if isinstance(v, bool) else v))


def build_parser():
    ap = argparse.ArgumentParser(prog="mapgerms", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("script", nargs="?", help="session file (default: stdin)")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--jet", type=int, help="x-degree bound D (default 8)")
    ap.add_argument("--tdeg", type=int, help="t-degree bound T (default 2D)")
    ap.add_argument("--tmax", type=int, help="pre-normal t-degree limit (default 2D)")
    ap.add_argument("--group", choices=("R", "K", "A", "L"))
    ap.add_argument("--level", type=int)
    ap.add_argument("--log", action="store_true", help="include the group-element log")
    ap.add_argument("--name", help="map or unfolding to use (default: latest declared)")
    ap.add_argument("--ideal", default="m", help="ideal a: m, m^d or R (default m)")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.script and args.script != "-":
            with open(args.script, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        session = parse(text)
    except DSLError as e:
        print("parse error: %s" % e, file=sys.stderr)
        return 2
    try:
        report = run(args.command, session, args)
    except Refusal as e:
        print(str(e), file=sys.stderr)
        return 1
    except ValueError as e:
        print("refused: %s" % e, file=sys.stderr)
        return 1
    print(render_json(report) if args.format == "json" else render_text(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
