"""Unit-capacity max-flow: min-cut values and initial edge-disjoint path systems.

Augmenting paths are searched smallest-edge-id-first, and the final flow is
peeled into the lexicographically least paths, so the initial system for a pair
is reproducible. A seeded rng can shuffle the preference order instead; the
minimizer has to work from any valid starting system.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import NoPath, UnknownVertex, ValidationFailure
from .graph import Dag, PairSpec, Path, path_end, validate_path


@dataclass(frozen=True)
class PathSystem:
    """A maximum set of pairwise edge-disjoint source->sink paths for one pair."""

    pair: PairSpec
    paths: tuple[Path, ...]

    @property
    def cardinality(self) -> int:
        return len(self.paths)


def validate_system(g: Dag, system: PathSystem) -> None:
    seen: set[str] = set()
    for p in system.paths:
        validate_path(g, p)
        if p.start != system.pair.source or path_end(g, p) != system.pair.sink:
            raise ValidationFailure(
                f"path does not run {system.pair.source}->{system.pair.sink}"
            )
        if seen & set(p.edges):
            raise ValidationFailure("paths within a system share an edge")
        seen |= set(p.edges)


def _order_key(g: Dag, rng: random.Random | None):
    if rng is None:
        return lambda eid: eid
    salt = {eid: rng.random() for eid in g.edge_ids}
    return salt.__getitem__


def _augment(g: Dag, s: str, t: str, flow: set[str], key) -> bool:
    """Find one augmenting path in the unit-capacity residual graph."""
    # moves: forward along unused edges, backward along used ones
    stack: list[tuple[str, list[tuple[str, bool]]]] = [(s, [])]
    seen = {s}
    while stack:
        v, trail = stack.pop()
        moves: list[tuple[float | str, str, str, bool]] = []
        for e in g.out_edges(v):
            if e.id not in flow:
                moves.append((key(e.id), e.id, e.head, True))
        for e in g.in_edges(v):
            if e.id in flow:
                moves.append((key(e.id), e.id, e.tail, False))
        for sort_key, eid, w, fwd in sorted(moves, reverse=True):
            if w in seen:
                continue
            new_trail = trail + [(eid, fwd)]
            if w == t:
                for eid2, fwd2 in new_trail:
                    if fwd2:
                        flow.add(eid2)
                    else:
                        flow.discard(eid2)
                return True
            seen.add(w)
            stack.append((w, new_trail))
    return False


def _max_flow(g: Dag, s: str, t: str, rng: random.Random | None = None) -> tuple[set[str], int]:
    if s not in set(g.vertices):
        raise UnknownVertex(s)
    if t not in set(g.vertices):
        raise UnknownVertex(t)
    key = _order_key(g, rng)
    flow: set[str] = set()
    value = 0
    while _augment(g, s, t, flow, key):
        value += 1
    return flow, value


def min_cut(g: Dag, s: str, t: str) -> int:
    """Minimum number of edges whose deletion destroys all s->t paths."""
    if s == t:
        raise ValidationFailure("min_cut needs distinct endpoints")
    return _max_flow(g, s, t)[1]


def _peel_paths(g: Dag, s: str, t: str, flow: set[str]) -> list[Path]:
    """Decompose a unit flow into paths, peeling the lexicographically least."""
    support = set(flow)
    paths: list[Path] = []
    while True:
        found = _least_path_in(g, s, t, support)
        if found is None:
            break
        paths.append(found)
        support -= set(found.edges)
    return paths


def _least_path_in(g: Dag, s: str, t: str, support: set[str]) -> Path | None:
    # DFS with smallest-edge-first preference and backtracking; the visited
    # guard is per-branch so dead ends do not block alternatives.
    def walk(v: str, used: set[str]) -> list[str] | None:
        if v == t:
            return []
        for e in sorted(g.out_edges(v), key=lambda e: e.id):
            if e.id in support and e.id not in used:
                used.add(e.id)
                rest = walk(e.head, used)
                if rest is not None:
                    return [e.id] + rest
                used.discard(e.id)
        return None

    edges = walk(s, set())
    if edges is None:
        return None
    return Path(tuple(edges), s)


def menger_paths(g: Dag, pair: PairSpec, rng: random.Random | None = None) -> PathSystem:
    """A maximum edge-disjoint path system for the pair; deterministic unless
    an rng shuffles the augmentation preference order."""
    flow, value = _max_flow(g, pair.source, pair.sink, rng)
    paths = _peel_paths(g, pair.source, pair.sink, flow)
    if not paths:
        raise NoPath(f"no {pair.source}->{pair.sink} path")
    if len(paths) != value:
        raise ValidationFailure("flow decomposition lost a path")
    system = PathSystem(pair, tuple(sorted(paths)))
    validate_system(g, system)
    return system
