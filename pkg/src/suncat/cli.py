"""suncat command line: gen, deck, common, supercard, saturate, verify, sweep, export.

Exit status: 0 success, 1 check failure, 2 usage or input error,
3 when only hypothesis-not-met outcomes were produced.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import random
import sys

from . import __version__, canon
from .canon import ResourceError
from .deck import common_cards_status, deck, witnesses
from .families import (
    ENUM_CAP,
    StructureKind,
    StructureSpec,
    enumerate_family,
    gen_structure,
    gen_sunshine,
    random_caterpillar,
    random_sunshine,
    spec_from_json,
)
from .graph import Graph, GraphError, PreconditionError
from .io import from_json_obj, read_graph, to_dot, to_graph6, to_json_obj
from .saturating import (
    UnsupportedRegime,
    chi_and_optimum,
    optimum_aut_set,
    saturating_set_json,
    sunshine_optimum,
)
from .supercard import HypothesisNotMet, all_sunshine_supercards, best_supercard
from . import verify

DEFAULT_SEED = 20240101
FORMATS = ["g6", "graph6", "dot", "json"]


class UsageError(Exception):
    pass


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True, default=str) + "\n")


def _load(arg: str) -> Graph:
    if arg == "-":
        text = sys.stdin.read()
    elif os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
    else:
        text = arg
    if not text.strip():
        raise GraphError(f"no graph in {arg!r}")
    if text.lstrip().startswith("{"):
        # accept the wrapped objects that gen itself prints
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"bad JSON in {arg!r}: {exc}") from None
        if isinstance(obj, dict) and isinstance(obj.get("graph"), dict):
            return from_json_obj(obj["graph"])
        if isinstance(obj, dict) and isinstance(obj.get("graph6"), str):
            return read_graph(obj["graph6"])
    return read_graph(text)


def _graph_out(g: Graph, fmt: str, out, extra: dict | None = None, order=None) -> None:
    if fmt == "dot":
        out.write(to_dot(g, order))
        return
    obj = dict(extra or {})
    if fmt == "json":
        obj["graph"] = to_json_obj(g)
    else:
        obj["graph6"] = to_graph6(g)
    _emit(obj, out)


def _structure(args) -> tuple:
    if args.n is None:
        raise UsageError("--structure needs --n")
    return gen_structure(StructureSpec(StructureKind(args.structure), args.n, args.nu_variant))


# ---- verbs ----------------------------------------------------------------


def cmd_gen(args, out) -> int:
    if args.structure:
        sc, u, t = _structure(args)
        extra = {"sidecar": sc.sidecar(), "U": to_graph6(u), "T": to_graph6(t)}
        _graph_out(sc.graph, args.format, out, extra, sc.cycle)
        return 0
    if args.spec:
        spec = spec_from_json(args.spec)
        if isinstance(spec, StructureSpec):
            sc, u, t = gen_structure(spec)
            _graph_out(sc.graph, args.format, out, {"sidecar": sc.sidecar()}, sc.cycle)
        else:
            _graph_out(gen_sunshine(spec), args.format, out, order=range(spec.c))
        return 0
    if args.random:
        rng = random.Random(args.seed)
        if args.n is None:
            raise UsageError("--random needs --n")
        if args.random == "caterpillar":
            g = random_caterpillar(rng, args.n)
        else:
            c = rng.randint(3, args.n)
            g = random_sunshine(rng, c, args.n - c)
        _graph_out(g, args.format, out, {"seed": args.seed})
        return 0
    if args.family:
        if args.n is None:
            raise UsageError("--family needs --n")
        gs = list(enumerate_family(args.family, args.n, args.cap))
        if args.format == "dot":
            for i, g in enumerate(gs):
                out.write(to_dot(g, name=f"G{i}"))
        elif args.format == "json":
            _emit({"graphs": [to_json_obj(g) for g in gs]}, out)
        else:
            _emit({"count": len(gs), "graphs": [to_graph6(g) for g in gs]}, out)
        return 0
    raise UsageError("gen needs one of --structure, --spec, --random, --family")


def cmd_deck(args, out) -> int:
    g = _load(args.graph)
    d = deck(g)
    counts = d.counter()
    _emit({"n": g.n, "deck": [c.hex() for c in d.cards], "classes": {c.hex(): k for c, k in counts.items()}}, out)
    return 0


def cmd_common(args, out) -> int:
    g, h = _load(args.g), _load(args.h)
    res = common_cards_status(g, h)
    obj = {"b": res.b}
    if res.status != "ok":
        obj["status"] = res.status
    if args.witnesses:
        obj["witnesses"] = [w.to_obj() for w in witnesses(g, h)]
    _emit(obj, out)
    return 0


def _sc_obj(sc, chi=None) -> dict:
    obj = {"graph6": to_graph6(sc.graph), "sidecar": sc.sidecar()}
    if chi is not None:
        obj["chi"] = chi
    return obj


def cmd_supercard(args, out) -> int:
    u, t = _load(args.u), _load(args.t)
    if args.all:
        scs = all_sunshine_supercards(u, t)
        if not scs:
            raise HypothesisNotMet("no witness yields a sunshine supercard")
        _emit({"supercards": [_sc_obj(sc, sunshine_optimum(sc)[0]) for sc in scs]}, out)
    else:
        sc, chi = best_supercard(u, t)
        _emit(_sc_obj(sc, chi), out)
    return 0


def cmd_saturate(args, out) -> int:
    sc = None
    if args.structure:
        sc = _structure(args)[0]
    elif len(args.graphs) == 2:
        sc, _ = best_supercard(_load(args.graphs[0]), _load(args.graphs[1]))
    elif len(args.graphs) == 1:
        if args.v is None or args.w is None:
            raise UsageError("a single supercard needs --v and --w")
        gp = _load(args.graphs[0])
        chi, x = chi_and_optimum(gp, args.v, args.w)
        obj = json.loads(saturating_set_json(x))
        obj["chi"] = chi
        _emit(obj, out)
        return 0
    else:
        raise UsageError("saturate needs --structure, a supercard with --v/--w, or a (U, T) pair")
    chi, x = sunshine_optimum(sc)
    obj = {"chi": chi, "supercard": _sc_obj(sc), "optimum": json.loads(saturating_set_json(x))}
    ao = optimum_aut_set(sc)
    if ao is not None:
        obj["aut_optimum"] = json.loads(saturating_set_json(ao.x, ao.kind))
        obj["delta"] = ao.phi.delta
    _emit(obj, out)
    return 0


def cmd_verify(args, out) -> int:
    reports = []
    if args.structure_values:
        if args.n_from_figures or (args.all_kinds and not args.n):
            nbk = {k: [n] for k, n in verify.EXAMPLE_SIZES.items()}
            if not args.all_kinds and args.kind:
                nbk = {k: nbk[k] for k in args.kind}
        else:
            if not args.n:
                raise UsageError("--structure-values needs --n-from-figures or --n")
            kinds = list(verify.EXAMPLE_SIZES) if args.all_kinds or not args.kind else args.kind
            nbk = {k: args.n for k in kinds}
        reports.append(verify.check_structure_values(nbk))
    if args.attainment:
        reports.append(verify.check_attainment(args.n or (14, 19, 24, 29)))
    if args.instance:
        if len(args.instance) == 1:
            if not args.n:
                raise UsageError("--instance KIND needs --n")
            kind = args.instance[0]
            for n in args.n:
                sc = gen_structure(StructureSpec(StructureKind(kind), n, args.nu_variant))[0]
                reports.append(verify.instance_report(sc))
        else:
            sc, _ = best_supercard(_load(args.instance[0]), _load(args.instance[1]))
            reports.append(verify.instance_report(sc))
    if not reports:
        raise UsageError("verify needs --structure-values, --attainment or --instance")
    _emit({"reports": [r.to_obj() for r in reports]}, out)
    codes = [r.status_code for r in reports]
    if 1 in codes:
        return 1
    if all(c == 3 for c in codes):
        return 3
    return 0


def _range(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in spec.split(",") if x]


def cmd_sweep(args, out) -> int:
    ns = _range(args.range)
    rep, table = verify.sweep(ns, args.b_min, heavy=not args.light, jobs=args.jobs, max_n=args.cap)
    diffs = verify.compare_golden(table) if args.compare_golden else []
    if args.write_golden:
        golden = {
            "provenance": {
                "generated_by": f"suncat sweep {args.range} --b-min {args.b_min}",
                "version": __version__,
                "backend": canon.backend_name(),
                "date": os.environ.get("SUNCAT_GOLDEN_DATE", datetime.date.today().isoformat()),
                "checks": {"instances": rep.instances, "passes": rep.passes, "failures": len(rep.failures)},
            },
            "table": table,
        }
        with open(args.write_golden, "w") as fh:
            json.dump(golden, fh, sort_keys=True, indent=1)
            fh.write("\n")
    if args.format == "tsv":
        out.write("n\tsunshine\tcaterpillar\tmax_b\targmax_count\n")
        for n in sorted(table, key=int):
            r = table[n]
            out.write(f"{n}\t{r['sunshine']}\t{r['caterpillar']}\t{r['max_b']}\t{len(r['argmax'])}\n")
    else:
        _emit({"report": rep.to_obj() if args.details else {**rep.to_obj(), "details": []}, "table": table, "golden_diffs": diffs}, out)
    for d in diffs:
        print(d, file=sys.stderr)
    if rep.failures or diffs:
        return 1
    if rep.instances and rep.passes == 0:
        return 3
    return 0


def cmd_export(args, out) -> int:
    g = _load(args.graph)
    fmt = args.format
    if fmt in ("g6", "graph6"):
        out.write(to_graph6(g) + "\n")
    elif fmt == "dot":
        out.write(to_dot(g))
    else:
        out.write(json.dumps(to_json_obj(g), sort_keys=True) + "\n")
    return 0


# ---- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="suncat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    def fmt(sp, default="g6"):
        sp.add_argument("--format", "--out", dest="format", choices=FORMATS, default=default)

    def structure(sp):
        sp.add_argument("--structure", choices=[k.value for k in StructureKind])
        sp.add_argument("--nu-variant", type=int)

    g = sub.add_parser("gen", help="generate graphs")
    structure(g)
    g.add_argument("--n", type=int)
    g.add_argument("--spec", help="SunshineSpec or StructureSpec as JSON")
    g.add_argument("--family", choices=["sunshine", "caterpillar"])
    g.add_argument("--random", choices=["sunshine", "caterpillar"])
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--cap", type=int, default=ENUM_CAP)
    fmt(g)
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("deck", help="deck of a graph as canonical forms")
    d.add_argument("graph")
    d.set_defaults(func=cmd_deck)

    c = sub.add_parser("common", help="number of common cards b(G, H)")
    c.add_argument("g")
    c.add_argument("h")
    c.add_argument("--witnesses", action="store_true")
    c.set_defaults(func=cmd_common)

    s = sub.add_parser("supercard", help="chi-maximal sunshine supercard of (U, T)")
    s.add_argument("u")
    s.add_argument("t")
    s.add_argument("--all", action="store_true")
    s.set_defaults(func=cmd_supercard)

    a = sub.add_parser("saturate", help="optimum saturating set")
    a.add_argument("graphs", nargs="*")
    structure(a)
    a.add_argument("--n", type=int)
    a.add_argument("--v", type=int)
    a.add_argument("--w", type=int)
    a.set_defaults(func=cmd_saturate)

    v = sub.add_parser("verify", help="replay counts, bounds and structural claims")
    v.add_argument("--structure-values", action="store_true")
    v.add_argument("--attainment", action="store_true")
    v.add_argument("--instance", nargs="+", metavar="KIND_OR_GRAPH")
    v.add_argument("--all-kinds", action="store_true")
    v.add_argument("--kind", action="append", choices=[k.value for k in StructureKind])
    v.add_argument("--n", type=int, action="append")
    v.add_argument("--n-from-figures", action="store_true")
    v.add_argument("--nu-variant", type=int)
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", help="exhaustive sunshine/caterpillar sweep")
    w.add_argument("--n", dest="range", default="1..9", help="orders, e.g. 7..9 or 5,7")
    w.add_argument("--b-min", type=int, default=0)
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--cap", type=int, default=verify.SWEEP_MAX_N)
    w.add_argument("--light", action="store_true", help="skip the per-supercard matching checks")
    w.add_argument("--compare-golden", action="store_true")
    w.add_argument("--write-golden", metavar="PATH")
    w.add_argument("--details", action="store_true")
    w.add_argument("--format", choices=["json", "tsv"], default="json")
    w.set_defaults(func=cmd_sweep)

    e = sub.add_parser("export", help="re-encode a graph")
    e.add_argument("graph")
    e.add_argument("--format", "--out", dest="format", choices=FORMATS, default="graph6")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"suncat {args.verb}: {exc}", file=sys.stderr)
        return 2
    except (HypothesisNotMet, UnsupportedRegime, PreconditionError) as exc:
        print(f"suncat {args.verb}: hypothesis not met: {exc}", file=sys.stderr)
        return 3
    except (GraphError, ResourceError, ValueError) as exc:
        print(f"suncat {args.verb}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
