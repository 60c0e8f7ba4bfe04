"""Command-line surface: mincut, minimize, oracle, bounds, gen.

Machine-readable JSON reports go to stdout, logs to stderr. Exit codes:
0 success, 2 parse/validation, 3 budget, 4 cyclic input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict
from pathlib import Path as FsPath

from . import bounds, dot, edgelist, generators
from .errors import (
    BudgetExceeded,
    CyclicInput,
    PathMergeError,
)
from .graph import Dag, PairSpec
from .menger import menger_paths, min_cut
from .merging import count_mergings, merging_edges, pair_merge_edges
from .oracle import brute_force_min
from .rerouting import minimize_all, prefix_reroute_pass


def _load(path: str, allow_cyclic: bool = False) -> tuple[Dag, tuple[PairSpec, ...]]:
    text = FsPath(path).read_text()
    return edgelist.parse(text, cyclic_allowed=allow_cyclic)


def _report(command: str, g: Dag, pairs, results: dict, started: float) -> dict:
    cuts = {}
    for p in pairs:
        try:
            cuts[str(p.index)] = min_cut(g, p.source, p.sink)
        except PathMergeError:
            cuts[str(p.index)] = None
    return {
        "command": command,
        "instance": {
            "vertices": len(g.vertices),
            "edges": len(g.edges),
            "pairs": [
                {"index": p.index, "source": p.source, "sink": p.sink}
                for p in sorted(pairs, key=lambda p: p.index)
            ],
            "cuts": cuts,
        },
        "results": results,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }


def _emit(report: dict) -> None:
    print(json.dumps(report, sort_keys=True, indent=2))


def _systems_payload(g: Dag, systems) -> dict:
    return {
        str(s.pair.index): [list(p.edges) for p in s.paths]
        for s in systems
    }


def cmd_mincut(args) -> int:
    started = time.perf_counter()
    g, pairs = _load(args.file, allow_cyclic=True)
    value = min_cut(g, args.source, args.sink)
    _emit(_report("mincut", g, pairs,
                  {"source": args.source, "sink": args.sink, "min_cut": value},
                  started))
    return 0


def cmd_minimize(args) -> int:
    started = time.perf_counter()
    g, pairs = _load(args.file, allow_cyclic=args.allow_cyclic)
    if not g.acyclic and not args.allow_cyclic:
        raise CyclicInput("input graph is cyclic; pass --allow-cyclic to count only")
    rng = random.Random(args.seed) if args.seed is not None else None
    systems = [menger_paths(g, p, rng) for p in sorted(pairs, key=lambda p: p.index)]
    trace_steps = []
    if g.acyclic:
        if len({p.source for p in pairs}) == 1 and len(pairs) > 1:
            systems, steps = prefix_reroute_pass(g, systems)
            trace_steps.extend(steps)
        systems, steps = minimize_all(g, systems)
        trace_steps.extend(steps)
    merge_set = sorted(merging_edges([p for s in systems for p in s.paths]))
    per_pair = {}
    ordered = sorted(systems, key=lambda s: s.pair.index)
    for i in range(len(ordered)):
        for j in range(i + 1, len(ordered)):
            key = f"{ordered[i].pair.index}-{ordered[j].pair.index}"
            per_pair[key] = len(pair_merge_edges(g, ordered[i], ordered[j]))
    variant = args.variant or (
        "Mstar" if len({p.source for p in pairs}) == 1 and len(pairs) > 1 else "M"
    )
    cut_tuple = tuple(
        min_cut(g, p.source, p.sink) for p in sorted(pairs, key=lambda p: p.index)
    )
    bnd = bounds.bound_report(variant, cut_tuple)
    encoding_nodes = sorted({g.edge(eid).tail for eid in merge_set})
    results = {
        "final_count": count_mergings(g, systems),
        "per_pair": per_pair,
        "merge_edges": merge_set,
        "encoding_nodes": encoding_nodes,
        "bound": asdict(bnd),
        "minimized": g.acyclic,
        "trace": [asdict(t) for t in trace_steps],
        "systems": _systems_payload(g, systems),
    }
    if args.dot:
        FsPath(args.dot).write_text(
            dot.graph_to_dot(g, pairs, merge_set, encoding_nodes)
        )
    if args.aux_dot and len(ordered) >= 2 and g.acyclic:
        from .reachability import build_auxiliary

        aux = build_auxiliary(g, ordered[0], ordered[1])
        FsPath(args.aux_dot).write_text(dot.aux_to_dot(aux))
    _emit(_report("minimize", g, pairs, results, started))
    return 0


def cmd_oracle(args) -> int:
    started = time.perf_counter()
    g, pairs = _load(args.file)
    res = brute_force_min(g, pairs, budget=args.budget, jobs=args.jobs)
    results = {
        "value": res.value,
        "systems_enumerated": res.systems_enumerated,
        "witness": _systems_payload(g, res.witness),
        "witness_edgelist": edgelist.serialize(g, pairs),
    }
    _emit(_report("oracle", g, pairs, results, started))
    return 0


def cmd_bounds(args) -> int:
    started = time.perf_counter()
    report = bounds.bound_report(args.variant, tuple(args.cuts))
    _emit({
        "command": "bounds",
        "results": asdict(report),
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    })
    return 0


def cmd_gen(args) -> int:
    started = time.perf_counter()
    if args.regen_extremal:
        _regen_extremal()
    inst = generators.build(args.name, *args.params)
    text = edgelist.serialize(inst.graph, inst.pairs)
    if args.out:
        FsPath(args.out).write_text(text)
    results = {
        "name": args.name,
        "params": list(args.params),
        "edges": len(inst.graph.edges),
        "notes": inst.notes,
        "edgelist": text,
    }
    if inst.systems is not None:
        results["canonical_count"] = count_mergings(inst.graph, inst.systems)
        results["systems"] = _systems_payload(inst.graph, inst.systems)
    if inst.intended is not None:
        results["intended"] = {"variant": inst.intended[0], "value": inst.intended[1]}
    _emit(_report("gen", inst.graph, inst.pairs, results, started))
    return 0


def _data_dir() -> FsPath:
    return FsPath(__file__).resolve().parent / "data"


def _regen_extremal() -> None:
    print("regenerating frozen extremal witnesses...", file=sys.stderr)
    d = _data_dir()
    d.mkdir(exist_ok=True)
    inst22 = generators.search_extremal_22()
    (d / "extremal_22.edgelist").write_text(
        edgelist.serialize(inst22.graph, inst22.pairs)
    )
    inst33 = generators.search_extremal_star33(base=inst22)
    (d / "extremal_star33.edgelist").write_text(
        edgelist.serialize(inst33.graph, inst33.pairs)
    )
    print("frozen witnesses rewritten", file=sys.stderr)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pathmerge",
        description="Edge-disjoint path systems and merging minimization in DAGs",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("mincut", help="min-cut between two vertices")
    p.add_argument("file")
    p.add_argument("source")
    p.add_argument("sink")
    p.set_defaults(fn=cmd_mincut)

    p = sub.add_parser("minimize", help="build path systems and minimize mergings")
    p.add_argument("file")
    p.add_argument("--variant", choices=["M", "Mstar"])
    p.add_argument("--seed", type=int, help="shuffle the initial augmentation order")
    p.add_argument("--dot", help="write the instance graph with merge highlights")
    p.add_argument("--aux-dot", help="write the first pair's auxiliary graph")
    p.add_argument("--allow-cyclic", action="store_true",
                   help="count mergings only; no minimization")
    p.set_defaults(fn=cmd_minimize)

    p = sub.add_parser("oracle", help="exact minimum by exhaustive enumeration")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("bounds", help="bound report for a cut tuple")
    p.add_argument("--variant", choices=["M", "Mstar"], default="M")
    p.add_argument("cuts", nargs="+", type=int)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("name")
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--out")
    p.add_argument("--regen-extremal", action="store_true",
                   help="re-run the extremal witness searches before generating")
    p.set_defaults(fn=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CyclicInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PathMergeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
