"""Command-line front end.

Documents are JSON envelopes::

    {"schema_version": "1", "kind": ..., "dimension": m, "order": N, "payload": {...}}

Morphisms and formal maps carry ``"dimensions": {"source": m, "target": n}``
instead of ``dimension``.  Rationals are always strings "p/q" in lowest
terms.  Exit codes: 0 pass, 1 defect found, 2 malformed or oversized input.
"""

import argparse
import json
import random
import re
import sys
from fractions import Fraction

from . import cooperad as co
from .combinatorics import alpha as signed_shuffle_count, block_shuffles, epsilon_split
from .correspondence import (
    conjugated_structure, exhaustive_structures, from_formal_map, from_geometric,
    oracle_equivalence_morphisms, oracle_equivalence_structures, pushforward_structure,
    seeded_structures, seeded_triples, standard_endo, standard_triples, to_formal_map,
    to_geometric,
)
from .formal_series import FormalMap, Series
from .homotopy_algebra import (
    MorphismCoefficients, StructureCoefficients,
    check_infinity_morphism, check_integrability, check_square,
)
from .vector_forms import Endomorphism, holomorphy_defect, is_almost_complex, nijenhuis_torsion

SCHEMA_VERSION = "1"
KINDS = ("structure", "morphism", "endomorphism", "formal_map", "report")

MAX_DIM = 8
MAX_ORDER = 6
MAX_COOPERAD_ARITY = 6
MAX_COOPERAD_K = 6
MAX_VERIFY_ARITY = 4
MAX_VERIFY_K = 3
MAX_SAMPLES = 1000


class InputError(Exception):
    """Malformed or oversized input; maps to exit code 2."""


# rationals


_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def fmt_rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s):
    if isinstance(s, bool):
        raise InputError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _RATIONAL.match(s.strip()):
        raise InputError(f"not a rational: {s!r}")
    try:
        return Fraction(s.strip())
    except ZeroDivisionError:
        raise InputError(f"zero denominator in {s!r}") from None


# documents


def _envelope(kind, order, payload, dims=None, dimension=None, meta=None):
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind}
    if dimension is not None:
        doc["dimension"] = dimension
    if dims is not None:
        doc["dimensions"] = {"source": dims[0], "target": dims[1]}
    doc["order"] = order
    doc["payload"] = payload
    if meta is not None:
        doc["meta"] = meta
    return doc


def _t_dict(exps):
    return {str(i): e for i, e in enumerate(exps, 1) if e}


def render_structure(j, meta=None):
    entries = [{"out": b, "inputs": list(alpha), "arg": a, "coeff": fmt_rational(c)}
               for (alpha, a, b), c in sorted(j.entries.items(), key=lambda kv: (len(kv[0][0]), kv[0]))]
    return _envelope("structure", j.max_weight, {"entries": entries}, dimension=j.dim, meta=meta)


def render_morphism(f, meta=None):
    entries = [{"out": b, "inputs": list(alpha), "coeff": fmt_rational(c)}
               for (alpha, b), c in sorted(f.entries.items(), key=lambda kv: (len(kv[0][0]), kv[0]))]
    return _envelope("morphism", f.max_weight, {"entries": entries},
                     dims=(f.source_dim, f.target_dim), meta=meta)


def render_endomorphism(e, meta=None):
    entries = [{"out": b, "gamma": g[0], "t": _t_dict(exps), "coeff": fmt_rational(c)}
               for (g, exps, b), c in sorted(e.terms.items(), key=lambda kv: (sum(kv[0][1]), kv[0]))]
    return _envelope("endomorphism", e.order, {"entries": entries}, dimension=e.dim, meta=meta)


def render_formal_map(fmap, meta=None):
    entries = []
    for b, comp in enumerate(fmap.components, 1):
        for (exps, _), c in sorted(comp.terms.items(), key=lambda kv: (sum(kv[0][0]), kv[0])):
            entries.append({"out": b, "t": _t_dict(exps), "coeff": fmt_rational(c)})
    return _envelope("formal_map", fmap.order, {"entries": entries},
                     dims=(fmap.source_dim, fmap.target_dim), meta=meta)


def render(obj, meta=None):
    if isinstance(obj, StructureCoefficients):
        return render_structure(obj, meta)
    if isinstance(obj, MorphismCoefficients):
        return render_morphism(obj, meta)
    if isinstance(obj, Endomorphism):
        return render_endomorphism(obj, meta)
    if isinstance(obj, FormalMap):
        return render_formal_map(obj, meta)
    raise TypeError(f"cannot render {type(obj).__name__}")


def _req(obj, key, typ, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    v = obj[key]
    if typ is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise InputError(f"{where}: field {key!r} must be an integer")
    if typ is not int and not isinstance(v, typ):
        raise InputError(f"{where}: field {key!r} has the wrong type")
    return v


def _bounded(value, lo, hi, what):
    if not lo <= value <= hi:
        raise InputError(f"{what} = {value} outside the supported range {lo}..{hi}")
    return value


def _parse_t(t, dim, where):
    if not isinstance(t, dict):
        raise InputError(f"{where}: 't' must be an object")
    exps = [0] * dim
    for k, e in t.items():
        if not (isinstance(k, str) and k.isdigit()) or not 1 <= int(k) <= dim:
            raise InputError(f"{where}: bad variable index {k!r}")
        if isinstance(e, bool) or not isinstance(e, int) or e < 0:
            raise InputError(f"{where}: bad exponent {e!r}")
        exps[int(k) - 1] = e
    return tuple(exps)


def _parse_index_list(xs, dim, where):
    if not isinstance(xs, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in xs):
        raise InputError(f"{where}: 'inputs' must be a list of integers")
    if any(not 1 <= x <= dim for x in xs):
        raise InputError(f"{where}: index out of range 1..{dim}")
    return tuple(sorted(xs))


def _check_index(x, dim, where, name):
    if isinstance(x, bool) or not isinstance(x, int) or not 1 <= x <= dim:
        raise InputError(f"{where}: {name!r} must be an integer in 1..{dim}")
    return x


def _entries(doc):
    payload = _req(doc, "payload", dict, "document")
    entries = _req(payload, "entries", list, "payload")
    for i, e in enumerate(entries):
        if not isinstance(e, dict):
            raise InputError(f"entry {i}: not an object")
    return entries


def _accumulate(acc, key, c, where):
    if key in acc:
        raise InputError(f"{where}: duplicate entry")
    acc[key] = c


def parse_document(doc):
    """Validate an envelope and return the object it describes."""
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {doc.get('schema_version')!r}")
    kind = _req(doc, "kind", str, "document")
    if kind not in KINDS or kind == "report":
        raise InputError(f"kind {kind!r} is not an input document")
    order = _bounded(_req(doc, "order", int, "document"), 0, MAX_ORDER, "order")
    if kind in ("structure", "endomorphism"):
        dim = _bounded(_req(doc, "dimension", int, "document"), 1, MAX_DIM, "dimension")
    else:
        dims = _req(doc, "dimensions", dict, "document")
        src = _bounded(_req(dims, "source", int, "dimensions"), 1, MAX_DIM, "source dimension")
        tgt = _bounded(_req(dims, "target", int, "dimensions"), 1, MAX_DIM, "target dimension")
    acc = {}
    try:
        for i, e in enumerate(_entries(doc)):
            where = f"entry {i}"
            c = parse_rational(_req(e, "coeff", (str, int), where))
            if kind == "structure":
                alpha = _parse_index_list(_req(e, "inputs", list, where), dim, where)
                if len(alpha) > order:
                    raise InputError(f"{where}: weight {len(alpha)} exceeds order {order}")
                key = (alpha, _check_index(e.get("arg"), dim, where, "arg"),
                       _check_index(e.get("out"), dim, where, "out"))
            elif kind == "morphism":
                alpha = _parse_index_list(_req(e, "inputs", list, where), src, where)
                if not 1 <= len(alpha) <= order:
                    raise InputError(f"{where}: weight {len(alpha)} outside 1..{order}")
                key = (alpha, _check_index(e.get("out"), tgt, where, "out"))
            elif kind == "endomorphism":
                exps = _parse_t(_req(e, "t", dict, where), dim, where)
                if sum(exps) > order:
                    raise InputError(f"{where}: degree {sum(exps)} exceeds order {order}")
                key = ((_check_index(e.get("gamma"), dim, where, "gamma"),), exps,
                       _check_index(e.get("out"), dim, where, "out"))
            else:
                exps = _parse_t(_req(e, "t", dict, where), src, where)
                if not 1 <= sum(exps) <= order:
                    raise InputError(f"{where}: degree {sum(exps)} outside 1..{order}")
                key = (exps, _check_index(e.get("out"), tgt, where, "out"))
            _accumulate(acc, key, c, where)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if kind == "structure":
        return StructureCoefficients(dim, order, acc)
    if kind == "morphism":
        return MorphismCoefficients(src, tgt, order, acc)
    if kind == "endomorphism":
        return Endomorphism(dim, order, acc)
    comps = [{} for _ in range(tgt)]
    for (exps, b), c in acc.items():
        comps[b - 1][(exps, ())] = c
    return FormalMap(src, order, [Series(src, order, t) for t in comps])


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def load(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_document(doc)


def as_structure(obj):
    if isinstance(obj, StructureCoefficients):
        return obj
    if isinstance(obj, Endomorphism):
        return from_geometric(obj)
    raise InputError("expected a structure or endomorphism document")


def as_morphism(obj):
    if isinstance(obj, MorphismCoefficients):
        return obj
    if isinstance(obj, FormalMap):
        return from_formal_map(obj)
    raise InputError("expected a morphism or formal_map document")


# reports


def _defects_json(rep):
    return {
        "equation": rep.equation,
        "certified_weight": rep.certified_weight,
        "evaluated": rep.evaluated,
        "ok": rep.ok,
        "defects": [{"weight": w, "indices": idx, "defect": fmt_rational(d)}
                    for w, idx, d in rep.defects],
    }


def _form_defects(form):
    out = []
    for (gam, exps, b), c in sorted(form.terms.items(), key=lambda kv: (sum(kv[0][1]), kv[0])):
        out.append({"gamma": list(gam), "t": _t_dict(exps), "out": b, "coeff": fmt_rational(c)})
    return out


def _report(command, ok, sections):
    return {"schema_version": SCHEMA_VERSION, "kind": "report",
            "payload": {"command": command, "ok": ok, "sections": sections}}


def _text_report(report):
    p = report["payload"]
    lines = [f"{p['command']}: {'PASS' if p['ok'] else 'FAIL'}"]
    for sec in p["sections"]:
        name = sec.get("equation") or sec.get("name") or sec.get("check")
        status = "ok" if sec.get("ok") else "FAIL"
        extra = ""
        cert = sec.get("certified_weight", sec.get("certified_order"))
        if cert is not None:
            extra = f" (certified to weight {cert})" if cert >= 0 else " (vacuous at this order)"
        if "count" in sec:
            extra += f" [{sec['count']} terms]"
        lines.append(f"  {name}: {status}{extra}")
        for d in sec.get("defects", [])[:20]:
            lines.append(f"    {json.dumps(d, sort_keys=True)}")
        for d in sec.get("failures", [])[:20]:
            lines.append(f"    {d if isinstance(d, str) else json.dumps(d, sort_keys=True)}")
        for d in sec.get("divergences", [])[:20]:
            lines.append(f"    {json.dumps(d, sort_keys=True)}")
        if "terms" in sec:
            lines.extend(f"    {t['coeff']} {t['term']}" for t in sec["terms"])
    return "\n".join(lines) + "\n"


def emit(report, fmt):
    sys.stdout.write(dumps(report) if fmt == "json" else _text_report(report))


def _truncate_structure(j, order):
    if order is None:
        return j
    if order < 0:
        raise InputError("--order must be non-negative")
    order = min(order, j.max_weight)
    return StructureCoefficients(j.dim, order,
                                 {k: v for k, v in j.entries.items() if len(k[0]) <= order})


def _truncate_morphism(f, order):
    if order is None:
        return f
    if order < 1:
        raise InputError("--order must be at least 1 for morphisms")
    order = min(order, f.max_weight)
    return MorphismCoefficients(f.source_dim, f.target_dim, order,
                                {k: v for k, v in f.entries.items() if len(k[0]) <= order})


# subcommands


def cmd_check_structure(args):
    j = _truncate_structure(as_structure(load(args.input)), args.order)
    sq, integ = check_square(j), check_integrability(j)
    endo = to_geometric(j)
    ac, defect = is_almost_complex(endo)
    tors = nijenhuis_torsion(endo)
    sections = [
        _defects_json(sq),
        _defects_json(integ),
        {"check": "geometric_square", "certified_order": endo.order, "ok": ac,
         "defects": _form_defects(defect)},
        {"check": "geometric_torsion", "certified_order": tors.order, "ok": tors.is_zero(),
         "defects": _form_defects(tors)},
    ]
    ok = all(s["ok"] for s in sections)
    emit(_report("check-structure", ok, sections), args.format)
    return 0 if ok else 1


def cmd_check_morphism(args):
    f = _truncate_morphism(as_morphism(load(args.morphism)), args.order)
    js = _truncate_structure(as_structure(load(args.source)), args.order)
    jt = _truncate_structure(as_structure(load(args.target)), args.order)
    if f.source_dim != js.dim or f.target_dim != jt.dim:
        raise InputError("dimension mismatch between morphism and structures")
    rep = check_infinity_morphism(f, js, jt, args.normalization)
    hol = holomorphy_defect(to_formal_map(f), to_geometric(js), to_geometric(jt))
    sections = [
        _defects_json(rep),
        {"check": "holomorphy", "certified_order": hol.order, "ok": hol.is_zero(),
         "defects": _form_defects(hol)},
    ]
    ok = all(s["ok"] for s in sections)
    emit(_report("check-morphism", ok, sections), args.format)
    return 0 if ok else 1


def _parse_profile(text):
    try:
        ks = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InputError(f"bad profile {text!r}; expected comma-separated integers") from None
    if not ks or any(k < 0 for k in ks):
        raise InputError(f"bad profile {text!r}")
    return ks


def _key_text(key):
    return key.render() if hasattr(key, "render") else co.render_key(key)


def cmd_expand_cooperad(args):
    kind, mode = args.kind, ("full" if args.full else "infinitesimal")
    if kind in ("qcbar", "qcx") and args.profile is None and args.arity is None:
        raise InputError(f"--kind {kind} needs --profile")
    if kind == "qcx":
        ks = _parse_profile(args.profile) if args.profile else (0,) * args.arity
        if args.arity is not None and args.arity != len(ks):
            raise InputError("--arity does not match the profile length")
        _bounded(len(ks), 1, MAX_COOPERAD_ARITY, "arity")
        _bounded(sum(ks), 0, MAX_COOPERAD_K, "total degree")
        if args.use_lambda:
            total, label = co.lambda_c(ks), "lambda"
        elif args.full:
            total, label = co.delta_full_qcx(ks), "full"
        else:
            total, label = co.delta1_qcx(ks), "infinitesimal"
        subject = co.generator(ks).render()
    elif kind == "qcbar":
        ks = _parse_profile(args.profile) if args.profile else None
        if ks is None or len(ks) != 1:
            raise InputError("--kind qcbar takes a single degree, e.g. --profile 2")
        _bounded(ks[0], 0, MAX_COOPERAD_K, "degree")
        total, label, subject = co.delta_qcbar(ks[0]), "full", co.ibar(ks[0]).render()
    else:
        if args.arity is None:
            raise InputError(f"--kind {kind} needs --arity")
        n = _bounded(args.arity, 1, MAX_COOPERAD_ARITY, "arity")
        if kind == "lie1":
            total = co.delta_full_lie(n) if args.full else co.delta1_lie(n)
            subject = co.lie_generator(n).render()
        else:
            total = co.delta_full_as(n) if args.full else co.delta1_as(n)
            subject = f"M{n}"
        label = mode
    terms = [{"term": _key_text(k), "coeff": fmt_rational(c)} for k, c in total]
    section = {"name": f"{kind} {label}", "subject": subject, "count": len(terms),
               "ok": True, "terms": terms}
    emit(_report("expand-cooperad", True, [section]), args.format)
    return 0


def _constant_eps(primed, doubled):
    return 1


def _unsigned_alpha(ks):
    return len(block_shuffles(ks))


def cmd_verify(args):
    suite = args.suite
    if suite in ("cooperad", "distributive"):
        max_arity = _bounded(args.max_arity if args.max_arity is not None else 3, 1,
                             MAX_VERIFY_ARITY, "--max-arity")
        max_k = _bounded(args.max_k if args.max_k is not None else 2, 0, MAX_VERIFY_K, "--max-k")
        if suite == "cooperad":
            eps = _constant_eps if args.mutate else epsilon_split
            rep = co.verify_cooperad_axioms(max_arity, max_k, eps)
        else:
            coef = _unsigned_alpha if args.mutate else signed_shuffle_count
            rep = co.verify_distributive_diagrams(max_arity, max_k, coef)
        sections = [rep.as_dict()]
    else:
        samples = _bounded(args.samples, 1, MAX_SAMPLES, "--samples")
        signs = (1, -1) if args.mutate else (1, 1)
        structures = [(f"exhaustive-{i}", j) for i, j in enumerate(exhaustive_structures())]
        structures += [(f"{label}-{i}", j)
                       for i, (label, j) in enumerate(seeded_structures(samples, args.seed))]
        triples = standard_triples(args.seed) + seeded_triples(samples, args.seed)
        sections = [oracle_equivalence_structures(structures, signs).as_dict(),
                    oracle_equivalence_morphisms(triples).as_dict()]
    ok = all(s["ok"] for s in sections)
    emit(_report("verify", ok, sections), args.format)
    return 0 if ok else 1


def cmd_gen_example(args):
    rng = random.Random(args.seed)
    order = _bounded(args.order, 0, 4, "--order")
    if args.kind == "standard":
        dim = _bounded(args.dim, 2, MAX_DIM, "--dim")
        if dim % 2:
            raise InputError("the standard structure needs even dimension")
        doc = render_structure(from_geometric(standard_endo(dim, order)))
    elif args.kind == "pushforward":
        dim = _bounded(args.dim, 2, 6, "--dim")
        if dim % 2:
            raise InputError("the standard structure needs even dimension")
        j, phi = pushforward_structure(dim, order, rng)
        doc = render_structure(j, meta={"diffeomorphism": render_formal_map(phi)})
    else:
        if args.dim not in (None, 4):
            raise InputError("perturbed4d is four-dimensional")
        if order < 1:
            raise InputError("perturbed4d needs --order >= 1")
        # redraw until integrability fails; deterministic for a fixed seed
        while True:
            j = conjugated_structure(4, order, rng)
            if not check_integrability(j).ok:
                break
        doc = render_structure(j)
    sys.stdout.write(dumps(doc))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="formalcx",
        description="Exact checks for complex structures on formal manifolds and their "
                    "homotopy-algebra counterparts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("check-structure", help="check the square and integrability equations")
    p.add_argument("input", help="structure or endomorphism document ('-' for stdin)")
    p.add_argument("--order", type=int, help="truncate to this weight first")
    fmt(p)
    p.set_defaults(func=cmd_check_structure)

    p = sub.add_parser("check-morphism", help="check the infinity-morphism equation")
    p.add_argument("morphism", help="morphism or formal_map document")
    p.add_argument("source", help="structure on the source")
    p.add_argument("target", help="structure on the target")
    p.add_argument("--order", type=int, help="truncate all inputs to this weight first")
    p.add_argument("--normalization", choices=("partition", "multiplicity"), default="partition",
                   help=argparse.SUPPRESS)
    fmt(p)
    p.set_defaults(func=cmd_check_morphism)

    p = sub.add_parser("expand-cooperad", help="expand a decomposition map")
    p.add_argument("--kind", choices=("lie1", "as1", "qcbar", "qcx"), required=True)
    p.add_argument("--arity", type=int)
    p.add_argument("--profile", help="comma-separated degrees, e.g. 1,0,2")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--full", action="store_true")
    mode.add_argument("--infinitesimal", action="store_true")
    mode.add_argument("--lambda", dest="use_lambda", action="store_true",
                      help="apply the distributive law to a qcx generator")
    fmt(p)
    p.set_defaults(func=cmd_expand_cooperad)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("--suite", choices=("cooperad", "distributive", "oracle"), required=True)
    p.add_argument("--max-arity", type=int)
    p.add_argument("--max-k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100, help="seeded samples for the oracle suite")
    p.add_argument("--mutate", action="store_true", help="break one sign on purpose")
    fmt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen-example", help="emit a fixture document")
    p.add_argument("--kind", choices=("standard", "pushforward", "perturbed4d"), required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_example)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if getattr(args, "dim", 0) is None and args.command == "gen-example" and args.kind != "perturbed4d":
        args.dim = 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"formalcx: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
