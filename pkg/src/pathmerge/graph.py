"""Immutable directed multigraph plus the path algebra everything else builds on.

Vertices and edge ids are opaque strings; iteration order is sorted everywhere
so downstream algorithms are reproducible. Parallel edges are allowed (distinct
ids, same endpoints). Degenerate paths (a single vertex) are represented by an
empty edge sequence anchored at a vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    CyclicInput,
    EdgeRepetition,
    EndpointMismatch,
    OrderViolation,
    UnknownVertex,
    ValidationFailure,
    VertexNotOnPath,
)


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    tail: str
    head: str


class Dag:
    """Directed multigraph, acyclic unless explicitly built cyclic-allowed."""

    def __init__(self, vertices, edges, cyclic_allowed: bool = False):
        self.vertices: tuple[str, ...] = tuple(sorted(set(vertices)))
        vset = set(self.vertices)
        by_id: dict[str, Edge] = {}
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if e.id in by_id:
                raise ValidationFailure(f"duplicate edge id {e.id!r}")
            if e.tail not in vset or e.head not in vset:
                raise UnknownVertex(f"edge {e.id!r} endpoint not a declared vertex")
            by_id[e.id] = e
        self._edges = {eid: by_id[eid] for eid in sorted(by_id)}
        self.cyclic_allowed = bool(cyclic_allowed)
        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self._edges.values():
            out[e.tail].append(e)
            inc[e.head].append(e)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inc.items()}
        if not self.cyclic_allowed and not self.acyclic:
            raise CyclicInput("graph contains a directed cycle")

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges.values())

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(self._edges)

    def edge(self, eid: str) -> Edge:
        return self._edges[eid]

    def has_edge(self, eid: str) -> bool:
        return eid in self._edges

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        if v not in self._out:
            raise UnknownVertex(v)
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        if v not in self._in:
            raise UnknownVertex(v)
        return self._in[v]

    @cached_property
    def acyclic(self) -> bool:
        return self._topo_order() is not None

    @cached_property
    def topo_index(self) -> dict[str, int]:
        order = self._topo_order()
        if order is None:
            raise CyclicInput("no topological order for a cyclic graph")
        return {v: i for i, v in enumerate(order)}

    def _topo_order(self) -> list[str] | None:
        indeg = {v: len(self._in[v]) for v in self.vertices}
        ready = sorted(v for v in self.vertices if indeg[v] == 0)
        order: list[str] = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            changed = False
            for e in self._out[v]:
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    ready.append(e.head)
                    changed = True
            if changed:
                ready.sort()
        return order if len(order) == len(self.vertices) else None

    def __eq__(self, other):
        return (
            isinstance(other, Dag)
            and self.vertices == other.vertices
            and self._edges == other._edges
            and self.cyclic_allowed == other.cyclic_allowed
        )

    def __hash__(self):
        return hash((self.vertices, tuple(self._edges.values()), self.cyclic_allowed))

    def __repr__(self):
        return f"Dag({len(self.vertices)} vertices, {len(self._edges)} edges)"


@dataclass(frozen=True, order=True)
class Path:
    """Ordered edge-id sequence; `start` anchors the degenerate empty path."""

    edges: tuple[str, ...]
    start: str

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True, order=True)
class PairSpec:
    source: str
    sink: str
    index: int


def make_path(g: Dag, edge_ids, start: str | None = None) -> Path:
    edge_ids = tuple(edge_ids)
    if edge_ids:
        start = g.edge(edge_ids[0]).tail
    elif start is None:
        raise ValidationFailure("empty path needs an anchor vertex")
    p = Path(edge_ids, start)
    validate_path(g, p)
    return p


def validate_path(g: Dag, p: Path) -> None:
    if p.start not in g._out:
        raise UnknownVertex(p.start)
    if len(set(p.edges)) != len(p.edges):
        raise EdgeRepetition(f"path repeats an edge id: {p.edges}")
    at = p.start
    for eid in p.edges:
        e = g.edge(eid)
        if e.tail != at:
            raise ValidationFailure(f"edge {eid!r} does not chain at {at!r}")
        at = e.head


def path_end(g: Dag, p: Path) -> str:
    return g.edge(p.edges[-1]).head if p.edges else p.start


def path_vertices(g: Dag, p: Path) -> tuple[str, ...]:
    verts = [p.start]
    for eid in p.edges:
        verts.append(g.edge(eid).head)
    return tuple(verts)


def is_acyclic(g: Dag) -> bool:
    return g.acyclic


def subpath(g: Dag, p: Path, s: str, t: str) -> Path:
    """Contiguous run of `p` from vertex `s` to vertex `t` (empty when s == t)."""
    verts = path_vertices(g, p)
    if s not in verts:
        raise VertexNotOnPath(f"{s!r} not on path")
    if t not in verts:
        raise VertexNotOnPath(f"{t!r} not on path")
    i = verts.index(s)
    try:
        j = verts.index(t, i)
    except ValueError:
        raise OrderViolation(f"{t!r} precedes {s!r} on path") from None
    return Path(p.edges[i:j], s)


def concat(g: Dag, p: Path, q: Path) -> Path:
    if path_end(g, p) != q.start:
        raise EndpointMismatch(
            f"cannot concatenate: {path_end(g, p)!r} != {q.start!r}"
        )
    edges = p.edges + q.edges
    if len(set(edges)) != len(edges):
        raise EdgeRepetition("concatenation repeats an edge id")
    return Path(edges, p.start)


def reachable(g: Dag, u: str, v: str) -> bool:
    """True iff a directed path (possibly empty) runs from u to v."""
    if u not in g._out:
        raise UnknownVertex(u)
    if v not in g._out:
        raise UnknownVertex(v)
    if u == v:
        return True
    seen = {u}
    stack = [u]
    while stack:
        w = stack.pop()
        for e in g.out_edges(w):
            if e.head == v:
                return True
            if e.head not in seen:
                seen.add(e.head)
                stack.append(e.head)
    return False


def is_smaller(g: Dag, p: Path, q: Path) -> bool:
    """True iff some directed path connects the end of p to the start of q."""
    return reachable(g, path_end(g, p), q.start)


def is_smaller_on(g: Dag, p: Path, q: Path, host: Path) -> bool:
    """True iff p and q are subpaths of `host` with p ending before q starts."""
    verts = path_vertices(g, host)
    ep, sq = path_end(g, p), q.start
    if ep not in verts or sq not in verts:
        return False
    i = verts.index(ep)
    if sq not in verts[i:]:
        return False
    j = verts.index(sq, i)
    if not _covers(host, p, g) or not _covers(host, q, g):
        return False
    return i <= j


def _covers(host: Path, p: Path, g: Dag) -> bool:
    if not p.edges:
        return p.start in path_vertices(g, host)
    n, m = len(host.edges), len(p.edges)
    return any(host.edges[i : i + m] == p.edges for i in range(n - m + 1))


def prefix_subgraph(g: Dag, anchors) -> Dag:
    """Subgraph spanned by every vertex from which some anchor is reachable."""
    anchors = list(anchors)
    if not anchors:
        raise UnknownVertex("anchor list is empty")
    for a in anchors:
        if a not in g._out:
            raise UnknownVertex(a)
    keep = set(anchors)
    stack = list(anchors)
    while stack:
        v = stack.pop()
        for e in g.in_edges(v):
            if e.tail not in keep:
                keep.add(e.tail)
                stack.append(e.tail)
    edges = [e for e in g.edges if e.tail in keep and e.head in keep]
    return Dag(keep, edges, cyclic_allowed=g.cyclic_allowed)
