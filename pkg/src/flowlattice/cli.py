"""Command-line interface: ``flowlattice <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import routes as routes_mod
from .checks import COUNTEREXAMPLE, Instance, TheoremReport, run_check, run_suite, summary_table
from .corpus import InstanceSpec, load_corpus
from .dag import FramedDag, to_tikz
from .diagram import CoherenceDiagram
from .errors import FlowLatticeError
from .geometry import flow_polytope, g_polytope
from .pulling import Subdivision, equals_triangulation, is_unimodular, pull


def _k(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_instance(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--path", type=_k, metavar="K", help="Path(k), e.g. 3,4,2")
    g.add_argument("--cycle", type=_k, metavar="K", help="Cycle(k), e.g. 3,2")
    g.add_argument("--dag", type=Path, metavar="FILE", help="dag.v1 JSON file")
    p.add_argument("--alt-parallel", action="store_true", help="give label 2 to the first parallel source/sink edge")


def _spec(args) -> InstanceSpec:
    pf = 2 if args.alt_parallel else 1
    if args.path:
        return InstanceSpec("path", args.path, parallel_first_label=pf)
    if args.cycle:
        return InstanceSpec("cycle", args.cycle, parallel_first_label=pf)
    d = FramedDag.from_json(json.loads(args.dag.read_text()))
    return InstanceSpec("general", dag=(d.n_inner, tuple((e.tail, e.head, e.label) for e in d.edges)))


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def cmd_gen(args) -> int:
    d = _spec(args).build()
    if args.emit == "tikz":
        print(to_tikz(d))
    else:
        _dump(d.to_json())
    return 0


def cmd_routes(args) -> int:
    d = _spec(args).build()
    data = routes_mod.to_json(d)
    if args.json:
        _dump({"schema": "routes.v1", "routes": data})
        return 0
    for r in data:
        pair = "(" + ",".join(r["pair"]) + ")" if "pair" in r else ""
        mark = " exceptional" if r["exceptional"] else ""
        print(f"{r['id']:>4} {pair:<12} g={r['g']}{mark}")
    print(f"{len(data)} routes")
    return 0


def cmd_diagram(args) -> int:
    cd = CoherenceDiagram(_spec(args).build())
    if args.emit == "json":
        _dump(cd.to_json())
    elif args.emit == "tikz":
        print(cd.to_tikz())
    else:
        print(cd.to_ascii())
    return 0


def cmd_pull_orders(args) -> int:
    cd = CoherenceDiagram(_spec(args).build())
    orders = list(cd.enumerate_pull_orders(args.limit))
    named = [[str(cd.boxes[i].pair) for i in o] for o in orders]
    if args.json:
        _dump({"orders": [list(o) for o in orders], "pairs": named})
    else:
        for o in named:
            print("0 " + " ".join(o))
        print(f"{len(orders)} orders")
    return 0


def cmd_poly(args) -> int:
    d = _spec(args).build()
    P = g_polytope(d) if args.which == "g" else flow_polytope(d)
    if args.json:
        _dump(P.to_json())
    else:
        print(f"dim {P.dim} in R^{P.ambient_dim}, {len(P.vertices)} vertices, {len(P.facets)} facets")
    return 0


def _read_order(path: Path, inst: Instance) -> list[int]:
    data = json.loads(path.read_text())
    out = []
    for item in data:
        if isinstance(item, int):
            out.append(item)
        else:
            a, b = str(item).split(",")
            out.append(inst.cd.box(a.strip(), b.strip()))
    return out


def cmd_pull(args) -> int:
    inst = Instance(_spec(args))
    if args.order == "canonical":
        order = inst.cd.canonical_pull_order()
    else:
        order = _read_order(Path(args.order), inst)
    points = [inst.origin] + [inst.g[i] for i in order]
    S = Subdivision.trivial(inst.P)
    for x in points:
        S = pull(S, x)
        if args.trace:
            print(json.dumps(S.to_json(f"g:{inst.spec.name}")))
    same = equals_triangulation(S, inst.dkk)
    if not args.trace:
        _dump(S.to_json(f"g:{inst.spec.name}") if args.json else {"cells": len(S.cells), "steps": len(points)})
    print(f"equals DKK: {same}; unimodular triangulation: {is_unimodular(S)}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    corpus = load_corpus(args.corpus)
    checks = args.checks.split(",") if args.checks else None
    progress = None
    if not args.quiet:
        progress = lambda r: print(f"{r.check_id:>4} {r.instance.name:<22} {r.status}  {r.detail}", file=sys.stderr)
    reports = run_suite(corpus, checks, args.seed, progress)
    print(summary_table(reports))
    if args.json:
        payload = {"schema": "report.v1", "seed": args.seed, "reports": [dict(r.to_json(), id=i) for i, r in enumerate(reports)]}
        Path(args.json).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    return 1 if any(r.status == COUNTEREXAMPLE for r in reports) else 0


def cmd_replay(args) -> int:
    payload = json.loads(Path(args.report).read_text())
    reps = payload["reports"]
    item = next((r for r in reps if r.get("id") == args.id), None)
    if item is None:
        print(f"no report with id {args.id}", file=sys.stderr)
        return 2
    spec = InstanceSpec.from_json(item["instance"])
    rep: TheoremReport = run_check(item["check"], spec, item.get("seed", 0))
    print(f"{rep.check_id} {spec.name}: {rep.status} {rep.detail}")
    same = rep.status == item["status"] and json.loads(json.dumps(rep.witness)) == item["witness"]
    print("replay matches the report" if same else "replay differs from the report")
    if rep.status == COUNTEREXAMPLE:
        _dump(rep.witness)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flowlattice", description="Flow polytopes, g-polytopes and DKK pulling orders.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a framed DAG")
    _add_instance(p)
    p.add_argument("--emit", choices=["json", "tikz"], default="json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("routes", help="list routes with pairs and g-vectors")
    _add_instance(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_routes)

    p = sub.add_parser("diagram", help="coherence diagram")
    _add_instance(p)
    p.add_argument("--emit", choices=["ascii", "tikz", "json"], default="ascii")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("pull-orders", help="enumerate DKK pull orders")
    _add_instance(p)
    p.add_argument("--limit", type=int, default=100)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pull_orders)

    p = sub.add_parser("poly", help="g-polytope or flow polytope")
    _add_instance(p)
    p.add_argument("--which", choices=["g", "flow"], default="g")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("pull", help="run a pulling order on the g-polytope")
    _add_instance(p)
    p.add_argument("--order", default="canonical", help="'canonical' or a JSON file of route ids or 'a,b' pairs")
    p.add_argument("--trace", action="store_true", help="print every intermediate subdivision as a JSON line")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pull)

    p = sub.add_parser("verify", help="run the structural checks over a corpus")
    p.add_argument("--corpus", default="default", help="'default', 'empty' or e.g. 'path:2;cycle:3,2'")
    p.add_argument("--checks", help="comma-separated check ids, e.g. T1,T12")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="FILE")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="rerun one report entry")
    p.add_argument("report")
    p.add_argument("--id", type=int, required=True)
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FlowLatticeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
