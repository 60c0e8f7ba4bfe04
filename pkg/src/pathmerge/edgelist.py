"""Plain-text edge-list format shared by the CLI and the frozen instances.

Lines (`#` starts a comment, blank lines ignored):

    cyclic-allowed
    pair <Si> <Ri>          repeatable; distinct-terminal form
    source <S>              single-source form, followed by `sink` lines
    sink <Ri>
    vertex <v>              only for vertices on no edge
    edge <id> <u> <v>

parse -> serialize -> parse is structure-identical; serialization is canonical
(single-source form whenever all pairs share one source, sorted edges).
"""

from __future__ import annotations

from .errors import ParseError
from .graph import Dag, Edge, PairSpec


def parse(text: str, cyclic_allowed: bool = False) -> tuple[Dag, tuple[PairSpec, ...]]:
    vertices: set[str] = set()
    edges: list[Edge] = []
    pair_terms: list[tuple[str, str]] = []
    source: str | None = None
    sinks: list[str] = []
    allow = cyclic_allowed
    seen_ids: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "cyclic-allowed":
            if len(tok) != 1:
                raise ParseError(f"line {lineno}: cyclic-allowed takes no arguments")
            allow = True
        elif kind == "pair":
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: pair needs <source> <sink>")
            pair_terms.append((tok[1], tok[2]))
            vertices.update(tok[1:3])
        elif kind == "source":
            if len(tok) != 2:
                raise ParseError(f"line {lineno}: source needs one vertex")
            if source is not None:
                raise ParseError(f"line {lineno}: duplicate source line")
            source = tok[1]
            vertices.add(source)
        elif kind == "sink":
            if len(tok) != 2:
                raise ParseError(f"line {lineno}: sink needs one vertex")
            sinks.append(tok[1])
            vertices.add(tok[1])
        elif kind == "vertex":
            if len(tok) != 2:
                raise ParseError(f"line {lineno}: vertex needs one id")
            vertices.add(tok[1])
        elif kind == "edge":
            if len(tok) != 4:
                raise ParseError(f"line {lineno}: edge needs <id> <u> <v>")
            eid, u, v = tok[1:4]
            if eid in seen_ids:
                raise ParseError(f"line {lineno}: duplicate edge id {eid!r}")
            seen_ids.add(eid)
            edges.append(Edge(eid, u, v))
            vertices.update((u, v))
        else:
            raise ParseError(f"line {lineno}: unknown directive {kind!r}")
    if source is not None and pair_terms:
        raise ParseError("mix of pair lines and source/sink lines")
    if source is not None:
        if not sinks:
            raise ParseError("source line without sink lines")
        pair_terms = [(source, r) for r in sinks]
    elif sinks:
        raise ParseError("sink lines without a source line")
    pairs = tuple(PairSpec(s, r, i) for i, (s, r) in enumerate(pair_terms, start=1))
    for p in pairs:
        if p.source == p.sink:
            raise ParseError(f"pair {p.index}: source equals sink")
    return Dag(vertices, edges, cyclic_allowed=allow), pairs


def serialize(g: Dag, pairs) -> str:
    pairs = sorted(pairs, key=lambda p: p.index)
    lines: list[str] = []
    if g.cyclic_allowed:
        lines.append("cyclic-allowed")
    sources = {p.source for p in pairs}
    if pairs and len(sources) == 1:
        lines.append(f"source {pairs[0].source}")
        lines.extend(f"sink {p.sink}" for p in pairs)
    else:
        lines.extend(f"pair {p.source} {p.sink}" for p in pairs)
    covered = {p.source for p in pairs} | {p.sink for p in pairs}
    for e in g.edges:
        covered.add(e.tail)
        covered.add(e.head)
    for v in g.vertices:
        if v not in covered:
            lines.append(f"vertex {v}")
    lines.extend(f"edge {e.id} {e.tail} {e.head}" for e in g.edges)
    return "\n".join(lines) + "\n"
