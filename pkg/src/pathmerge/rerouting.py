"""Merging-reducing reroutes and the fixpoint minimizers.

Three detection rules, cheapest first: (1) the same-pair shortcut (two merged
subpaths on one path pair, replace the segment between their merge-edge tails
by the counterpart's segment); (2) a rotation certified by a merged subpath
semi-reachable from above by itself, found by a complete BFS over the step
relation in either orientation; (3) a repeated owner pair along one
regular-form path of the acyclic auxiliary graph, rotated the same way.

Every candidate is validated by actually rebuilding the target system and
recounting before it leaves the detector, so only strictly-reducing valid
plans are ever reported. Rotations are applied as edge-set surgery: drop the
deserted connectors, add the borrowed ones, peel the result back into
lexicographically least paths.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import CyclicInput, SourceMismatch, StalePlan, ValidationFailure
from .graph import Dag, Path
from .menger import PathSystem, validate_system
from .merging import (
    MergedSubpath,
    merging_edges,
    pair_merge_edges,
    shared_runs,
    _run_is_merging,
)
from .reachability import (
    PairContext,
    _sides,
    make_context,
    build_auxiliary,
    regular_decomposition,
    self_reachable_above,
    _odd_step_targets,
    _even_step_targets,
)


@dataclass(frozen=True)
class ReroutePlan:
    kind: str  # cycle_rotation | same_pair_shortcut | prefix_swap | last_merge_prefix
    target_system: int  # pair index
    counterpart: int  # pair index
    edits: tuple[tuple[int, Path], ...]
    expected_delta: int
    state_hash: str


@dataclass(frozen=True)
class TraceStep:
    kind: str
    target: int
    counterpart: int
    pair_before: int
    pair_after: int
    global_before: int
    global_after: int


def state_hash(systems) -> str:
    blob = repr(
        tuple(
            (s.pair.index, s.pair.source, s.pair.sink, s.paths)
            for s in sorted(systems, key=lambda s: s.pair.index)
        )
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def pair_count(g: Dag, a: PathSystem, b: PathSystem) -> int:
    return len(pair_merge_edges(g, a, b))


def global_count(systems) -> int:
    return len(merging_edges([p for s in systems for p in s.paths]))


def _replace(systems, new_system: PathSystem):
    return tuple(
        new_system if s.pair.index == new_system.pair.index else s for s in systems
    )


def _edits_for(old: PathSystem, new_paths: tuple[Path, ...]) -> tuple[tuple[int, Path], ...]:
    return tuple(
        (i, p) for i, (old_p, p) in enumerate(zip(old.paths, new_paths)) if old_p != p
    )


def _candidate_plan(
    g: Dag,
    a: PathSystem,
    b: PathSystem,
    target: PathSystem,
    new_paths,
    kind: str,
) -> ReroutePlan | None:
    """Validate a rebuilt target system; None unless strictly reducing."""
    new_paths = tuple(sorted(new_paths))
    if len(new_paths) != len(target.paths):
        return None
    candidate = PathSystem(target.pair, new_paths)
    try:
        validate_system(g, candidate)
    except Exception:
        return None
    other = b if target.pair.index == a.pair.index else a
    before = pair_count(g, a, b)
    after = pair_count(
        g,
        candidate if target.pair.index == a.pair.index else a,
        candidate if target.pair.index == b.pair.index else b,
    )
    if after >= before:
        return None
    return ReroutePlan(
        kind=kind,
        target_system=target.pair.index,
        counterpart=other.pair.index,
        edits=_edits_for(target, new_paths),
        expected_delta=after - before,
        state_hash=state_hash((a, b)),
    )


# ---------------------------------------------------------------------------
# rule 1: same-pair shortcut


def _shortcut_plans(g: Dag, ctx: PairContext):
    a, b = ctx.sys_a, ctx.sys_b
    by_pair: dict[tuple[int, int], list[int]] = {}
    for k in range(len(ctx.runs)):
        by_pair.setdefault((ctx.a_host[k], ctx.b_host[k]), []).append(k)
    for (ia, ib), ks in sorted(by_pair.items()):
        if len(ks) < 2:
            continue
        ks = sorted(ks, key=lambda k: ctx.a_pos[k])
        pa, pb = a.paths[ia], b.paths[ib]
        for xi in range(len(ks)):
            for yi in range(xi + 1, len(ks)):
                u, v = ks[xi], ks[yi]
                if ctx.b_pos[u] >= ctx.b_pos[v]:
                    continue
                new_pa = Path(
                    pa.edges[: ctx.a_pos[u]]
                    + pb.edges[ctx.b_pos[u] : ctx.b_pos[v]]
                    + pa.edges[ctx.a_pos[v] :],
                    pa.start,
                )
                paths = list(a.paths)
                paths[ia] = new_pa
                plan = _candidate_plan(g, a, b, a, paths, "same_pair_shortcut")
                if plan:
                    yield plan
                new_pb = Path(
                    pb.edges[: ctx.b_pos[u]]
                    + pa.edges[ctx.a_pos[u] : ctx.a_pos[v]]
                    + pb.edges[ctx.b_pos[v] :],
                    pb.start,
                )
                paths = list(b.paths)
                paths[ib] = new_pb
                plan = _candidate_plan(g, a, b, b, paths, "same_pair_shortcut")
                if plan:
                    yield plan


# ---------------------------------------------------------------------------
# rule 2: rotation from a self-reachable-from-above merged subpath


def _cycle_steps_valid(ctx: PairContext, role: str, cycle: list[int]) -> bool:
    for i in range(len(cycle) - 1):
        x, y = cycle[i], cycle[i + 1]
        cands = (
            _odd_step_targets(ctx, role, x)
            if i % 2 == 0
            else _even_step_targets(ctx, role, x)
        )
        if y not in {t for t, _ in cands}:
            return False
    return True


def _shorten_cycle(ctx: PairContext, role: str, cycle: list[int]) -> list[int] | None:
    """Splice a cyclic witness until its even-step carriers are distinct."""
    iside, _ = _sides(role)
    while True:
        m = (len(cycle) - 1) // 2
        hosts = [ctx.host(iside, cycle[2 * k + 1]) for k in range(m)]
        dup = None
        seen: dict[int, int] = {}
        for pos, h in enumerate(hosts):
            if h in seen:
                dup = (seen[h], pos)
                break
            seen[h] = pos
        if dup is None:
            return cycle
        k, l = dup
        outer = cycle[: 2 * k + 2] + cycle[2 * l + 2 :]
        inner = cycle[2 * k + 2 : 2 * l + 2] + [cycle[2 * k + 2]]
        for cand in (outer, inner):
            if (
                len(cand) >= 3
                and len(cand) % 2 == 1
                and cand[0] == cand[-1]
                and _cycle_steps_valid(ctx, role, cand)
            ):
                cycle = cand
                break
        else:
            return None


def _peel_exact(g: Dag, s: str, t: str, edges: set[str], count: int):
    """Decompose an edge set into exactly `count` s->t paths covering it."""
    remaining = set(edges)
    paths: list[Path] = []

    def least(v: str, used: set[str]):
        if v == t:
            return []
        for e in sorted(g.out_edges(v), key=lambda e: e.id):
            if e.id in remaining and e.id not in used:
                used.add(e.id)
                rest = least(e.head, used)
                if rest is not None:
                    return [e.id] + rest
                used.discard(e.id)
        return None

    for _ in range(count):
        found = least(s, set())
        if found is None:
            return None
        paths.append(Path(tuple(found), s))
        remaining -= set(found)
    if remaining:
        return None
    return paths


def _rotation_paths(ctx: PairContext, role: str, cycle: list[int]):
    """Edge-set surgery for a distinct-carrier cyclic witness."""
    iside, jside = _sides(role)
    target = ctx.sys_a if role == "a" else ctx.sys_b
    other = ctx.sys_b if role == "a" else ctx.sys_a
    deserted: set[str] = set()
    borrowed: list[str] = []
    m = (len(cycle) - 1) // 2
    for k in range(m):
        m0, m1, m2 = cycle[2 * k], cycle[2 * k + 1], cycle[2 * k + 2]
        h = ctx.host(iside, m1)
        t = ctx.host(jside, m1)
        if ctx.host(iside, m2) != h or ctx.host(jside, m0) != t:
            return None
        pi = target.paths[h]
        deserted.update(pi.edges[ctx.end(iside, m1) : ctx.pos(iside, m2)])
        pj = other.paths[t]
        borrowed.extend(pj.edges[ctx.end(jside, m1) : ctx.pos(jside, m0)])
    if len(set(borrowed)) != len(borrowed):
        return None
    base = {eid for p in target.paths for eid in p.edges}
    if set(borrowed) & (base - deserted):
        return None
    new_set = (base - deserted) | set(borrowed)
    return _peel_exact(
        ctx.g, target.pair.source, target.pair.sink, new_set, len(target.paths)
    )


def _rotation_plans(g: Dag, ctx: PairContext, role: str):
    target = ctx.sys_a if role == "a" else ctx.sys_b
    for k in range(len(ctx.runs)):
        w = self_reachable_above(ctx, role, k)
        if w is None:
            continue
        idxs = [_ctx_index(ctx, mm) for mm in w.sequence]
        cycle = _shorten_cycle(ctx, role, idxs)
        if cycle is None:
            continue
        new_paths = _rotation_paths(ctx, role, cycle)
        if new_paths is None:
            continue
        plan = _candidate_plan(
            g, ctx.sys_a, ctx.sys_b, target, new_paths, "cycle_rotation"
        )
        if plan:
            yield plan


def _ctx_index(ctx: PairContext, m: MergedSubpath) -> int:
    for k, r in enumerate(ctx.runs):
        if r == m:
            return k
    raise ValidationFailure("run not in context")


# ---------------------------------------------------------------------------
# rule 3: repeated owner pair on a regular-form auxiliary path


def _repeated_pair_plans(g: Dag, ctx: PairContext):
    try:
        aux = build_auxiliary(g, ctx.sys_a, ctx.sys_b)
        if not aux.dag.acyclic:
            return
        reg = regular_decomposition(aux)
    except Exception:
        return
    run_of_anchor = aux.anchors
    for path_edges in reg:
        seen_pairs: dict[tuple[int, int], int] = {}
        verts: list[str] = []
        for eid in path_edges:
            e = aux.dag.edge(eid)
            verts.extend((e.tail, e.head))
        order: list[int] = []
        for v in verts:
            for run_idx, _side in run_of_anchor.get(v, ()):
                if run_idx not in order:
                    order.append(run_idx)
        for run_idx in order:
            owners = (ctx.a_host[run_idx], ctx.b_host[run_idx])
            if owners in seen_pairs:
                u, v = seen_pairs[owners], run_idx
                if ctx.a_pos[u] > ctx.a_pos[v]:
                    u, v = v, u
                for role in ("a", "b"):
                    cycle = [v, u, v]
                    if not _cycle_steps_valid(ctx, role, cycle):
                        continue
                    new_paths = _rotation_paths(ctx, role, cycle)
                    if new_paths is None:
                        continue
                    target = ctx.sys_a if role == "a" else ctx.sys_b
                    plan = _candidate_plan(
                        g, ctx.sys_a, ctx.sys_b, target, new_paths, "cycle_rotation"
                    )
                    if plan:
                        yield plan
            else:
                seen_pairs[owners] = run_idx


def detect_reducing_rerouting(g: Dag, a: PathSystem, b: PathSystem) -> ReroutePlan | None:
    """First validated plan that strictly reduces the pairwise merging count."""
    if not g.acyclic:
        raise CyclicInput("rerouting detection needs an acyclic graph")
    ctx = make_context(g, a, b)
    if not ctx.runs:
        return None
    for plan in _shortcut_plans(g, ctx):
        return plan
    for role in ("a", "b"):
        for plan in _rotation_plans(g, ctx, role):
            return plan
    for plan in _repeated_pair_plans(g, ctx):
        return plan
    return None


# ---------------------------------------------------------------------------
# applying plans and the minimizers


def apply_plan(g: Dag, plan: ReroutePlan, systems) -> tuple[PathSystem, ...]:
    """Apply a plan to the full system collection, re-validating everything."""
    systems = tuple(sorted(systems, key=lambda s: s.pair.index))
    by_index = {s.pair.index: s for s in systems}
    a = by_index.get(plan.target_system)
    b = by_index.get(plan.counterpart)
    if a is None or b is None:
        raise ValidationFailure("plan references unknown systems")
    if plan.state_hash != state_hash((a, b)):
        raise StalePlan("plan was built against different systems")
    paths = list(a.paths)
    for i, p in plan.edits:
        paths[i] = p
    candidate = PathSystem(a.pair, tuple(paths))
    validate_system(g, candidate)
    before = pair_count(g, a, b)
    after = pair_count(g, candidate, b)
    if after - before != plan.expected_delta or after >= before:
        raise ValidationFailure("plan does not deliver its promised decrease")
    return _replace(systems, candidate)


def minimize_pair(g: Dag, a: PathSystem, b: PathSystem):
    """Detect/apply until no rule fires; returns (a, b, trace)."""
    if not g.acyclic:
        raise CyclicInput("minimization needs an acyclic graph")
    trace: list[TraceStep] = []
    initial = pair_count(g, a, b)
    iterations = 0
    while True:
        plan = detect_reducing_rerouting(g, a, b)
        if plan is None:
            break
        iterations += 1
        if iterations > initial:
            raise ValidationFailure("minimize_pair exceeded its iteration bound")
        before_pair = pair_count(g, a, b)
        before_global = global_count((a, b))
        new_systems = apply_plan(g, plan, (a, b))
        a = next(s for s in new_systems if s.pair.index == a.pair.index)
        b = next(s for s in new_systems if s.pair.index == b.pair.index)
        trace.append(
            TraceStep(
                plan.kind,
                plan.target_system,
                plan.counterpart,
                before_pair,
                pair_count(g, a, b),
                before_global,
                global_count((a, b)),
            )
        )
    return a, b, trace


def minimize_all(g: Dag, systems):
    """Round-robin pairwise minimization under the global acceptance rule:
    a plan lands only if the pairwise count drops and the global distinct
    merge-edge count does not rise."""
    if not g.acyclic:
        raise CyclicInput("minimization needs an acyclic graph")
    systems = tuple(sorted(systems, key=lambda s: s.pair.index))
    if not systems:
        raise ValidationFailure("minimize_all needs at least one system")
    trace: list[TraceStep] = []
    seen = {state_hash(systems)}
    while True:
        fired = False
        indices = [s.pair.index for s in systems]
        for ii in range(len(indices)):
            for jj in range(ii + 1, len(indices)):
                a = systems[ii]
                b = systems[jj]
                plan = detect_reducing_rerouting(g, a, b)
                if plan is None:
                    continue
                candidate = apply_plan(g, plan, systems)
                gb, ga = global_count(systems), global_count(candidate)
                if ga > gb:
                    continue
                h = state_hash(candidate)
                if h in seen:
                    continue
                seen.add(h)
                trace.append(
                    TraceStep(
                        plan.kind,
                        plan.target_system,
                        plan.counterpart,
                        pair_count(g, a, b),
                        pair_count(g, a, b) + plan.expected_delta,
                        gb,
                        ga,
                    )
                )
                systems = candidate
                fired = True
                break
            if fired:
                break
        if not fired:
            return systems, trace


def _first_edge_private(all_paths, path: Path) -> bool:
    first = path.edges[0]
    return all(first not in q.edges for q in all_paths if q is not path)


def prefix_reroute_pass(g: Dag, systems):
    """Shared-source prefix rules, applied to a fixpoint.

    (i) a path whose prefix from the source is private absorbs the prefixes of
    every path first-merging with it; (ii) a min-cut-1 path re-roots its prefix
    at its last merge. The global count never increases.
    """
    systems = tuple(sorted(systems, key=lambda s: s.pair.index))
    sources = {s.pair.source for s in systems}
    if len(sources) != 1:
        raise SourceMismatch(f"prefix pass needs one shared source, got {sources}")
    trace: list[TraceStep] = []
    seen = {state_hash(systems)}
    while True:
        changed = False
        for step in (_prefix_absorb_step(g, systems), _last_merge_step(g, systems)):
            if step is None:
                continue
            candidate, kind, target, counterpart = step
            gb, ga = global_count(systems), global_count(candidate)
            h = state_hash(candidate)
            if ga > gb or h in seen:
                continue
            seen.add(h)
            trace.append(TraceStep(kind, target, counterpart, -1, -1, gb, ga))
            systems = candidate
            changed = True
            break
        if not changed:
            return systems, trace


def _indexed_paths(systems):
    return [
        (s.pair.index, pi, p)
        for s in systems
        for pi, p in enumerate(s.paths)
    ]


def _prefix_absorb_step(g: Dag, systems):
    entries = _indexed_paths(systems)
    all_paths = [p for _, _, p in entries]
    for sys_idx, _, beta in entries:
        if not _first_edge_private(all_paths, beta):
            continue
        merges = []  # (pos on beta, other system, other path idx, run length per q)
        for osys, opi, q in entries:
            if q is beta or osys == sys_idx:
                continue
            for i, j, length in shared_runs(beta, q):
                if _run_is_merging(beta, q, i, j):
                    merges.append((i, osys, opi, j, length))
        if not merges:
            continue
        merges.sort()
        first_pos = merges[0][0]
        partners = [m for m in merges if m[0] == first_pos]
        candidate = list(systems)
        ok = True
        for i, osys, opi, j, length in partners:
            target = next(s for s in candidate if s.pair.index == osys)
            q = target.paths[opi]
            new_q = Path(beta.edges[: i + length] + q.edges[j + length :], beta.start)
            paths = list(target.paths)
            paths[opi] = new_q
            new_sys = PathSystem(target.pair, tuple(paths))
            try:
                validate_system(g, new_sys)
            except Exception:
                ok = False
                break
            candidate = [
                new_sys if s.pair.index == osys else s for s in candidate
            ]
        if not ok:
            continue
        return tuple(candidate), "prefix_swap", partners[0][1], sys_idx
    return None


def _last_merge_step(g: Dag, systems):
    entries = _indexed_paths(systems)
    for s in systems:
        if len(s.paths) != 1:
            continue
        p = s.paths[0]
        merges = []
        for osys, opi, q in entries:
            if q is p or osys == s.pair.index:
                continue
            for i, j, length in shared_runs(p, q):
                if _run_is_merging(p, q, i, j):
                    merges.append((i, osys, opi, j))
        if not merges:
            continue
        merges.sort()
        i, osys, opi, j = merges[-1]
        q = next(x for x in systems if x.pair.index == osys).paths[opi]
        new_p = Path(q.edges[:j] + p.edges[i:], q.start)
        new_sys = PathSystem(s.pair, (new_p,))
        try:
            validate_system(g, new_sys)
        except Exception:
            continue
        candidate = tuple(
            new_sys if x.pair.index == s.pair.index else x for x in systems
        )
        return candidate, "last_merge_prefix", s.pair.index, osys
    return None
