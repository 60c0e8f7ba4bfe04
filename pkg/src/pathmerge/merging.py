"""Merging edges and maximal merged subpaths between paths.

A merging sits at an edge traversed by at least two paths arriving via two
distinct immediately-preceding edges; a path that starts at the edge
contributes no predecessor and so never creates a merging on its own. Mergings
are counted without multiplicity: one per distinct edge, however many path
pairs meet there.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAMerge, ValidationFailure
from .graph import Dag, Path
from .menger import PathSystem, validate_system


@dataclass(frozen=True)
class MergedSubpath:
    """Maximal shared run between two owner paths, anchored at its merge edge.

    Owners are (pair index, path position) handles into the two systems.
    """

    owner_a: tuple[int, int]
    owner_b: tuple[int, int]
    merge_edge: str
    run: Path


def _pred(p: Path, eid: str) -> str | None:
    i = p.edges.index(eid)
    return p.edges[i - 1] if i > 0 else None


def shared_runs(pa: Path, pb: Path) -> list[tuple[int, int, int]]:
    """Maximal contiguous runs of edges shared by both paths.

    Returns (position on pa, position on pb, length) triples in pa order.
    """
    pos_b = {eid: i for i, eid in enumerate(pb.edges)}
    runs: list[tuple[int, int, int]] = []
    i = 0
    n = len(pa.edges)
    while i < n:
        eid = pa.edges[i]
        j = pos_b.get(eid)
        if j is None:
            i += 1
            continue
        length = 1
        while (
            i + length < n
            and pos_b.get(pa.edges[i + length]) == j + length
        ):
            length += 1
        runs.append((i, j, length))
        i += length
    return runs


def _run_is_merging(pa: Path, pb: Path, i: int, j: int) -> bool:
    fa = pa.edges[i - 1] if i > 0 else None
    fb = pb.edges[j - 1] if j > 0 else None
    return fa is not None and fb is not None and fa != fb


def merging_edges(paths) -> set[str]:
    """Every edge where at least two of the paths meet via distinct predecessors."""
    users: dict[str, list[str | None]] = {}
    for p in paths:
        for k, eid in enumerate(p.edges):
            users.setdefault(eid, []).append(p.edges[k - 1] if k > 0 else None)
    out: set[str] = set()
    for eid, preds in users.items():
        distinct = {f for f in preds if f is not None}
        if len(distinct) >= 2:
            out.add(eid)
    return out


def merged_subpath(g: Dag, pa: Path, pb: Path, e: str) -> MergedSubpath:
    """The maximal shared run of pa and pb starting at merge edge e."""
    if e not in pa.edges or e not in pb.edges:
        raise NotAMerge(f"edge {e!r} is not shared by both paths")
    i, j = pa.edges.index(e), pb.edges.index(e)
    if not _run_is_merging(pa, pb, i, j):
        raise NotAMerge(f"paths do not merge at {e!r}")
    length = 1
    while (
        i + length < len(pa.edges)
        and j + length < len(pb.edges)
        and pa.edges[i + length] == pb.edges[j + length]
    ):
        length += 1
    run = Path(pa.edges[i : i + length], g.edge(e).tail)
    return MergedSubpath((0, 0), (1, 0), e, run)


def pairwise_merged_subpaths(
    g: Dag, a: PathSystem, b: PathSystem
) -> tuple[MergedSubpath, ...]:
    """All maximal merged subpaths between any path of a and any path of b,
    sorted by topological position of the merge edge, then ids."""
    if a.pair.index == b.pair.index:
        raise ValidationFailure("pairwise merged subpaths need distinct pairs")
    out: list[MergedSubpath] = []
    for ia, pa in enumerate(a.paths):
        for ib, pb in enumerate(b.paths):
            for i, j, length in shared_runs(pa, pb):
                if not _run_is_merging(pa, pb, i, j):
                    continue
                e = pa.edges[i]
                run = Path(pa.edges[i : i + length], g.edge(e).tail)
                out.append(
                    MergedSubpath((a.pair.index, ia), (b.pair.index, ib), e, run)
                )
    if g.acyclic:
        topo = g.topo_index
        out.sort(key=lambda m: (topo[g.edge(m.merge_edge).tail], m.merge_edge,
                                m.owner_a, m.owner_b))
    else:
        out.sort(key=lambda m: (m.merge_edge, m.owner_a, m.owner_b))
    return tuple(out)


def cross_shares_all_merged(a: PathSystem, b: PathSystem) -> bool:
    """True iff every shared run between the systems qualifies as a merging."""
    for pa in a.paths:
        for pb in b.paths:
            for i, j, _length in shared_runs(pa, pb):
                if not _run_is_merging(pa, pb, i, j):
                    return False
    return True


def pair_merge_edges(g: Dag, a: PathSystem, b: PathSystem) -> frozenset[str]:
    """Distinct merge edges between two systems (pairwise count basis)."""
    return frozenset(m.merge_edge for m in pairwise_merged_subpaths(g, a, b))


def count_mergings(g: Dag, systems) -> int:
    """Distinct merge edges over the union of all systems' paths."""
    systems = list(systems)
    for s in systems:
        validate_system(g, s)
    all_paths = [p for s in systems for p in s.paths]
    return len(merging_edges(all_paths))
