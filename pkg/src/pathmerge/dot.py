"""DOT export: instance graphs with merge highlights, and auxiliary graphs.

Output is byte-stable for identical inputs: everything is emitted in sorted
order and nothing depends on hashing or timestamps.
"""

from __future__ import annotations

from .graph import Dag
from .reachability import AuxGraph


def graph_to_dot(g: Dag, pairs=(), merge_edges=frozenset(), encoding_nodes=()) -> str:
    merge_edges = set(merge_edges)
    encoding = sorted(set(encoding_nodes))
    terminals = {p.source for p in pairs} | {p.sink for p in pairs}
    lines = ["digraph G {"]
    if encoding:
        lines.append(f'  // encoding nodes: {" ".join(encoding)}')
    for v in g.vertices:
        attrs = []
        if v in terminals:
            attrs.append("shape=box")
        if v in encoding:
            attrs.append("peripheries=2")
        suffix = f' [{", ".join(attrs)}]' if attrs else ""
        lines.append(f'  "{v}"{suffix};')
    for e in g.edges:
        attrs = [f'label="{e.id}"']
        if e.id in merge_edges:
            attrs.append("color=red")
            attrs.append("penwidth=2")
        lines.append(f'  "{e.tail}" -> "{e.head}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def aux_to_dot(aux: AuxGraph) -> str:
    """Forward edges solid, reversed dashed, anchors labelled with their runs."""
    lines = ["digraph Aux {"]
    for v in aux.dag.vertices:
        entries = aux.anchors.get(v)
        if entries:
            tag = ",".join(f"{k}{side}" for k, side in entries)
            lines.append(f'  "{v}" [shape=diamond, label="{v}\\n{tag}"];')
        else:
            lines.append(f'  "{v}" [label="{v}"];')
    for e in aux.dag.edges:
        style = "solid" if aux.kinds[e.id] == "forward" else "dashed"
        lines.append(
            f'  "{e.tail}" -> "{e.head}" [label="{e.id}", style={style}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
