"""Semi-reachability between merged subpaths, and the auxiliary pair graph.

Semi-reachability alternates two step kinds between merged subpaths of a fixed
system pair: odd steps walk backwards along a counterpart path whose connecting
segment hosts no merging of the pair, even steps walk forwards along a
same-side path. A subpath reachable from itself "from above" (even sequence
length) certifies a merging-reducing rerouting.

The auxiliary graph re-creates the pair with non-system edges dropped, vertex
crossings detached, merged runs contracted to anchor pairs, and
second-system-only edges reversed; an alternating cycle there mirrors a
self-reachability witness, and when it is acyclic it decomposes into exactly
c1+c2 regular paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    CyclicInput,
    DegreeViolation,
    PreconditionUnverified,
    ValidationFailure,
)
from .graph import Dag, Edge, Path
from .menger import PathSystem
from .merging import MergedSubpath, cross_shares_all_merged, pairwise_merged_subpaths


@dataclass(frozen=True)
class ReachWitness:
    """A semi-reachability sequence with its carrying path indices."""

    sequence: tuple[MergedSubpath, ...]
    through: int  # pair index of the forward-carrying system
    odd_steps: tuple[int, ...]  # t_k: counterpart path index per odd step
    even_steps: tuple[int, ...]  # h_k: same-side path index per even step
    parity: str  # 'above' | 'below'

    def __len__(self):
        return len(self.sequence)


@dataclass
class PairContext:
    """Precomputed run/host positions for one ordered system pair."""

    g: Dag
    sys_a: PathSystem
    sys_b: PathSystem
    runs: tuple[MergedSubpath, ...]
    a_host: tuple[int, ...] = field(default_factory=tuple)
    a_pos: tuple[int, ...] = field(default_factory=tuple)
    b_host: tuple[int, ...] = field(default_factory=tuple)
    b_pos: tuple[int, ...] = field(default_factory=tuple)

    def host(self, side: str, k: int) -> int:
        return self.a_host[k] if side == "a" else self.b_host[k]

    def pos(self, side: str, k: int) -> int:
        return self.a_pos[k] if side == "a" else self.b_pos[k]

    def end(self, side: str, k: int) -> int:
        return self.pos(side, k) + len(self.runs[k].run.edges)


def make_context(g: Dag, a: PathSystem, b: PathSystem) -> PairContext:
    runs = pairwise_merged_subpaths(g, a, b)
    a_host, a_pos, b_host, b_pos = [], [], [], []
    for m in runs:
        ia, ib = m.owner_a[1], m.owner_b[1]
        a_host.append(ia)
        b_host.append(ib)
        a_pos.append(a.paths[ia].edges.index(m.merge_edge))
        b_pos.append(b.paths[ib].edges.index(m.merge_edge))
    return PairContext(
        g, a, b, runs,
        tuple(a_host), tuple(a_pos), tuple(b_host), tuple(b_pos),
    )


def _sides(role: str) -> tuple[str, str]:
    """(even/forward side, odd/backward side) for the given through-role."""
    return ("a", "b") if role == "a" else ("b", "a")


def _odd_step_targets(ctx: PairContext, role: str, x: int) -> list[tuple[int, int]]:
    """Runs reachable from run x by one odd step; (run, carrier path index)."""
    _, jside = _sides(role)
    host = ctx.host(jside, x)
    x_pos = ctx.pos(jside, x)
    out = []
    on_host = [k for k in range(len(ctx.runs)) if ctx.host(jside, k) == host]
    for y in on_host:
        if y == x or ctx.end(jside, y) > x_pos:
            continue
        lo = ctx.end(jside, y)
        if any(lo <= ctx.pos(jside, z) < x_pos for z in on_host if z not in (x, y)):
            continue
        out.append((y, host))
    return sorted(out)


def _even_step_targets(ctx: PairContext, role: str, x: int) -> list[tuple[int, int]]:
    iside, _ = _sides(role)
    host = ctx.host(iside, x)
    x_end = ctx.end(iside, x)
    out = [
        (y, host)
        for y in range(len(ctx.runs))
        if y != x and ctx.host(iside, y) == host and ctx.pos(iside, y) >= x_end
    ]
    return sorted(out)


def _role_for(ctx: PairContext, through: int) -> str:
    if through == ctx.sys_a.pair.index:
        return "a"
    if through == ctx.sys_b.pair.index:
        return "b"
    raise ValidationFailure(f"pair index {through} is not part of this pair")


def _run_index(ctx: PairContext, m: MergedSubpath) -> int:
    for k, r in enumerate(ctx.runs):
        if r == m:
            return k
    raise ValidationFailure("merged subpath does not belong to this pair")


def _witness_from_trail(
    ctx: PairContext, role: str, trail: list[tuple[int, int | None]]
) -> ReachWitness:
    runs = tuple(ctx.runs[k] for k, _ in trail)
    # carriers land on the target element of each step: odd steps end at odd
    # indices, even steps at even indices > 0
    odd = tuple(c for i, (_, c) in enumerate(trail) if i % 2 == 1 and c is not None)
    even = tuple(
        c for i, (_, c) in enumerate(trail) if i % 2 == 0 and i > 0 and c is not None
    )
    through = ctx.sys_a.pair.index if role == "a" else ctx.sys_b.pair.index
    parity = "above" if (len(trail) - 1) % 2 == 0 else "below"
    return ReachWitness(runs, through, odd, even, parity)


def _bfs(ctx: PairContext, role: str, start: int):
    """Shortest trails from (start, even) to every reachable (run, parity)."""
    # state: (run, idx_parity); parent map keeps (prev_state, carrier)
    init = (start, 0)
    parents: dict[tuple[int, int], tuple[tuple[int, int] | None, int | None]] = {
        init: (None, None)
    }
    frontier = [init]
    while frontier:
        nxt: list[tuple[int, int]] = []
        for state in frontier:
            run, par = state
            steps = (
                _odd_step_targets(ctx, role, run)
                if par == 0
                else _even_step_targets(ctx, role, run)
            )
            for y, carrier in steps:
                ns = (y, 1 - par)
                if ns not in parents:
                    parents[ns] = (state, carrier)
                    nxt.append(ns)
        frontier = nxt
    return parents


def _trail_to(parents, state) -> list[tuple[int, int | None]]:
    trail = []
    cur = state
    while cur is not None:
        prev, carrier = parents[cur]
        trail.append((cur[0], carrier))
        cur = prev
    trail.reverse()
    return trail


def semi_reachable(
    g: Dag,
    a: PathSystem,
    b: PathSystem,
    u: MergedSubpath,
    v: MergedSubpath,
    through: int,
    ctx: PairContext | None = None,
) -> ReachWitness | None:
    """Shortest witness that v is semi-reachable through the given system by u,
    or None. u == v yields the zero-length witness (parity 'above')."""
    ctx = ctx or make_context(g, a, b)
    role = _role_for(ctx, through)
    ku, kv = _run_index(ctx, u), _run_index(ctx, v)
    if ku == kv:
        return _witness_from_trail(ctx, role, [(ku, None)])
    parents = _bfs(ctx, role, ku)
    best = None
    for par in (0, 1):
        state = (kv, par)
        if state in parents:
            trail = _trail_to(parents, state)
            if best is None or len(trail) < len(best):
                best = trail
    if best is None:
        return None
    return _witness_from_trail(ctx, role, best)


def self_reachable_above(
    ctx: PairContext, role: str, start: int
) -> ReachWitness | None:
    """Nontrivial witness that a run is semi-reachable from above by itself."""
    # run a BFS that may return to the start state; seed the closing
    # transitions by hand so the trivial zero-length witness is excluded
    parents = _bfs(ctx, role, start)
    best: list[tuple[int, int | None]] | None = None
    for state, (_prev, _c) in parents.items():
        run, par = state
        if par != 1:
            continue
        for y, carrier in _even_step_targets(ctx, role, run):
            if y != start:
                continue
            trail = _trail_to(parents, state) + [(start, carrier)]
            if len(trail) >= 3 and (best is None or len(trail) < len(best)):
                best = trail
    if best is None:
        return None
    return _witness_from_trail(ctx, role, best)


def validate_witness(ctx: PairContext, w: ReachWitness) -> None:
    """Re-check a witness against the raw definition; raises on violation."""
    role = _role_for(ctx, w.through)
    idxs = [_run_index(ctx, m) for m in w.sequence]
    n = len(idxs) - 1
    if w.parity != ("above" if n % 2 == 0 else "below"):
        raise ValidationFailure("witness parity disagrees with sequence length")
    oi = ei = 0
    for i in range(n):
        x, y = idxs[i], idxs[i + 1]
        if i % 2 == 0:
            cands = dict(_odd_step_targets(ctx, role, x))
            if y not in cands:
                raise ValidationFailure(f"odd step {i} invalid")
            if oi < len(w.odd_steps) and w.odd_steps[oi] != cands[y]:
                raise ValidationFailure(f"odd carrier {oi} wrong")
            oi += 1
        else:
            cands = dict(_even_step_targets(ctx, role, x))
            if y not in cands:
                raise ValidationFailure(f"even step {i} invalid")
            if ei < len(w.even_steps) and w.even_steps[ei] != cands[y]:
                raise ValidationFailure(f"even carrier {ei} wrong")
            ei += 1


def regularize_witness(ctx: PairContext, w: ReachWitness) -> ReachWitness:
    """Shorten a witness until its even-step carriers are pairwise distinct.

    The caller guarantees no element of the sequence is self-reachable from
    above; each splice is re-validated and a failure raises
    PreconditionUnverified rather than trusting the shortening sketch.
    """
    role = _role_for(ctx, w.through)
    idxs = [_run_index(ctx, m) for m in w.sequence]
    odd = list(w.odd_steps)
    even = list(w.even_steps)
    while True:
        dup = None
        seen: dict[int, int] = {}
        for pos, h in enumerate(even):
            if h in seen:
                dup = (seen[h], pos)
                break
            seen[h] = pos
        if dup is None:
            break
        k, l = dup
        # sequence indices: even step k connects 2k+1 -> 2k+2
        new_idxs = idxs[: 2 * k + 2] + idxs[2 * l + 2 :]
        new_odd = odd[: k + 1] + odd[l + 1 :]
        new_even = even[:k] + even[l:]
        cand = ReachWitness(
            tuple(ctx.runs[i] for i in new_idxs),
            w.through,
            tuple(new_odd),
            tuple(new_even),
            "above" if (len(new_idxs) - 1) % 2 == 0 else "below",
        )
        try:
            validate_witness(ctx, cand)
        except ValidationFailure as exc:
            raise PreconditionUnverified(
                f"splice produced an invalid witness: {exc}"
            ) from exc
        idxs, odd, even = new_idxs, new_odd, new_even
    return ReachWitness(
        tuple(ctx.runs[i] for i in idxs),
        w.through,
        tuple(odd),
        tuple(even),
        "above" if (len(idxs) - 1) % 2 == 0 else "below",
    )


# ---------------------------------------------------------------------------
# auxiliary graph


@dataclass
class AuxGraph:
    dag: Dag
    kinds: dict[str, str]  # aux edge id -> 'forward' | 'reversed'
    anchors: dict[str, tuple[tuple[int, str], ...]]  # vertex -> ((run, side),...)
    terminals: dict[str, str | None]  # 's1' 'r1' 's2' 'r2'
    c1: int
    c2: int
    clean: bool
    labels: dict[str, str]  # aux vertex -> original vertex
    runs: tuple[MergedSubpath, ...]


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def build_auxiliary(g: Dag, a: PathSystem, b: PathSystem) -> AuxGraph:
    """Detach / delete / reverse construction for one ordered system pair."""
    ctx = make_context(g, a, b)
    runs = ctx.runs
    deleted = {eid for m in runs for eid in m.run.edges}
    sides = {"a": a, "b": b}
    uf = _UnionFind()
    users: dict[str, list[tuple[str, int, int]]] = {}
    for side, system in sides.items():
        for pi, path in enumerate(system.paths):
            for pos, eid in enumerate(path.edges):
                users.setdefault(eid, []).append((side, pi, pos))
    for eid, occ in users.items():
        if eid in deleted or len(occ) < 2:
            continue
        first = occ[0]
        for other in occ[1:]:
            uf.union((first[0], first[1], first[2]), (other[0], other[1], other[2]))
            uf.union(
                (first[0], first[1], first[2] + 1),
                (other[0], other[1], other[2] + 1),
            )
    for side, system in sides.items():
        for pi in range(1, len(system.paths)):
            uf.union((side, 0, 0), (side, pi, 0))
            uf.union(
                (side, 0, len(system.paths[0].edges)),
                (side, pi, len(system.paths[pi].edges)),
            )
    for k, m in enumerate(runs):
        ia, ib = ctx.a_host[k], ctx.b_host[k]
        uf.union(("a", ia, ctx.a_pos[k]), ("b", ib, ctx.b_pos[k]))
        uf.union(
            ("a", ia, ctx.a_pos[k] + len(m.run.edges)),
            ("b", ib, ctx.b_pos[k] + len(m.run.edges)),
        )

    def token_vertex(tok) -> str:
        side, pi, pos = tok
        path = sides[side].paths[pi]
        if pos < len(path.edges):
            return g.edge(path.edges[pos]).tail
        return g.edge(path.edges[-1]).head if path.edges else path.start

    # name classes deterministically: original vertex plus a copy counter
    roots: dict = {}
    for eid, occ in users.items():
        if eid in deleted:
            continue
        for side, pi, pos in occ:
            for p in (pos, pos + 1):
                tok = (side, pi, p)
                roots[uf.find(tok)] = None
    terminal_tokens = {}
    for side, system in sides.items():
        if system.paths:
            start_tok = (side, 0, 0)
            end_tok = (side, 0, len(system.paths[0].edges))
            terminal_tokens["s1" if side == "a" else "s2"] = uf.find(start_tok)
            terminal_tokens["r1" if side == "a" else "r2"] = uf.find(end_tok)
            roots[uf.find(start_tok)] = None
            roots[uf.find(end_tok)] = None
    anchor_roots: dict = {}
    for k, m in enumerate(runs):
        ia, ib = ctx.a_host[k], ctx.b_host[k]
        start_root = uf.find(("a", ia, ctx.a_pos[k]))
        end_root = uf.find(("a", ia, ctx.a_pos[k] + len(m.run.edges)))
        anchor_roots.setdefault(start_root, []).append((k, "a"))
        anchor_roots.setdefault(end_root, []).append((k, "b"))
        roots[start_root] = None
        roots[end_root] = None

    by_vertex: dict[str, list] = {}
    for root in roots:
        by_vertex.setdefault(token_vertex(root), []).append(root)
    names: dict = {}
    labels: dict[str, str] = {}
    for v in sorted(by_vertex):
        group = sorted(by_vertex[v])
        for i, root in enumerate(group):
            name = v if len(group) == 1 else f"{v}.{i}"
            names[root] = name
            labels[name] = v

    aux_edges: list[Edge] = []
    kinds: dict[str, str] = {}
    for eid in sorted(users):
        occ = users[eid]
        if eid in deleted:
            continue
        side0, pi0, pos0 = occ[0]
        tail = names[uf.find((side0, pi0, pos0))]
        head = names[uf.find((side0, pi0, pos0 + 1))]
        forward = any(side == "a" for side, _, _ in occ)
        if forward:
            aux_edges.append(Edge(eid, tail, head))
            kinds[eid] = "forward"
        else:
            aux_edges.append(Edge(eid, head, tail))
            kinds[eid] = "reversed"

    dag = Dag(set(names.values()), aux_edges, cyclic_allowed=True)
    anchors = {
        names[root]: tuple(sorted(entries))
        for root, entries in anchor_roots.items()
    }
    terminals = {
        key: names.get(root) for key, root in terminal_tokens.items()
    }
    for key in ("s1", "r1", "s2", "r2"):
        terminals.setdefault(key, None)
    return AuxGraph(
        dag=dag,
        kinds=kinds,
        anchors=anchors,
        terminals=terminals,
        c1=len(a.paths),
        c2=len(b.paths),
        clean=cross_shares_all_merged(a, b),
        labels=labels,
        runs=runs,
    )


def check_aux_degrees(aux: AuxGraph) -> None:
    """Degree structure of the construction; raises DegreeViolation."""
    g = aux.dag
    special: dict[str, tuple[str, int]] = {}
    for key, direction, want in (
        ("s1", "out", aux.c1),
        ("r2", "out", aux.c2),
        ("s2", "in", aux.c2),
        ("r1", "in", aux.c1),
    ):
        vtx = aux.terminals[key]
        if vtx is not None:
            special[vtx] = (direction, want)
    for v in g.vertices:
        indeg, outdeg = len(g.in_edges(v)), len(g.out_edges(v))
        if v in special:
            direction, want = special[v]
            have, other = (outdeg, indeg) if direction == "out" else (indeg, outdeg)
            if have != want or other != 0:
                raise DegreeViolation(
                    f"terminal {v}: in={indeg} out={outdeg}, expected {direction}={want}"
                )
        elif v in aux.anchors:
            if indeg != 1 or outdeg != 1:
                raise DegreeViolation(f"anchor {v}: in={indeg} out={outdeg}")
        else:
            if indeg > 1 or outdeg > 1:
                raise DegreeViolation(f"vertex {v}: in={indeg} out={outdeg}")


def find_alternating_cycle(aux: AuxGraph):
    """A directed cycle split into maximal same-kind segments, or None."""
    g = aux.dag
    color: dict[str, int] = {}
    stack_edges: list[Edge] = []
    cycle: list[Edge] | None = None

    def dfs(v: str) -> bool:
        nonlocal cycle
        color[v] = 1
        for e in g.out_edges(v):
            if cycle is not None:
                return True
            w = e.head
            if color.get(w, 0) == 0:
                stack_edges.append(e)
                if dfs(w):
                    return True
                stack_edges.pop()
            elif color[w] == 1:
                # back edge: close the cycle
                tailset = [e]
                for se in reversed(stack_edges):
                    tailset.append(se)
                    if se.tail == w:
                        break
                cycle = list(reversed(tailset))
                return True
        color[v] = 2
        return False

    for v in g.vertices:
        if color.get(v, 0) == 0 and dfs(v):
            break
    if cycle is None:
        return None
    # rotate to start at an anchor when possible, then segment by kind/anchors
    starts = [i for i, e in enumerate(cycle) if e.tail in aux.anchors]
    if starts:
        i = starts[0]
        cycle = cycle[i:] + cycle[:i]
    segments: list[tuple[str, tuple[str, ...]]] = []
    for e in cycle:
        kind = aux.kinds[e.id]
        if (
            segments
            and segments[-1][0] == kind
            and e.tail not in aux.anchors
        ):
            segments[-1] = (kind, segments[-1][1] + (e.id,))
        else:
            segments.append((kind, (e.id,)))
    return tuple(segments)


def regular_decomposition(aux: AuxGraph) -> tuple[tuple[str, ...], ...]:
    """Peel the acyclic auxiliary graph into its c1+c2 regular-form paths."""
    if not aux.dag.acyclic:
        raise CyclicInput("regular decomposition needs an acyclic auxiliary graph")
    check_aux_degrees(aux)
    g = aux.dag
    used: set[str] = set()
    paths: list[tuple[str, ...]] = []
    interior_seen: set[str] = set()
    for term in ("s1", "r2"):
        start = aux.terminals[term]
        if start is None:
            continue
        for first in sorted(g.out_edges(start), key=lambda e: e.id):
            walk = [first.id]
            used.add(first.id)
            v = first.head
            while True:
                outs = [e for e in g.out_edges(v) if e.id not in used]
                if not outs:
                    break
                if len(outs) > 1:
                    raise DegreeViolation(f"branching interior vertex {v}")
                if v in interior_seen:
                    raise DegreeViolation(f"paths share interior vertex {v}")
                interior_seen.add(v)
                walk.append(outs[0].id)
                used.add(outs[0].id)
                v = outs[0].head
            ends = {aux.terminals["s2"], aux.terminals["r1"]}
            if v not in ends:
                raise DegreeViolation(f"regular path ends at {v}, not a terminal")
            paths.append(tuple(walk))
    if len(paths) != aux.c1 + aux.c2:
        raise DegreeViolation(
            f"{len(paths)} regular paths, expected {aux.c1 + aux.c2}"
        )
    if len(used) != len(g.edges):
        raise DegreeViolation("regular decomposition left edges uncovered")
    return tuple(paths)
