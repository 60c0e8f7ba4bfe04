"""Exact minimum merging counts on small instances by exhaustive enumeration.

Every set of maximum edge-disjoint path systems is enumerated per pair; the
product is searched with branch-and-bound (partial merging counts only grow
when systems are added, so pruning against the incumbent is admissible).
Budgets are loud: a truncated oracle would be worse than none.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import BudgetExceeded, CyclicInput
from .graph import Dag, PairSpec, Path
from .menger import PathSystem, min_cut
from .merging import merging_edges


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: tuple[PathSystem, ...]
    systems_enumerated: int
    elapsed: float


def _all_paths(g: Dag, s: str, t: str, banned: frozenset[str]) -> list[Path]:
    """All s->t paths avoiding `banned` edges, lexicographic by edge ids."""
    out: list[Path] = []

    def walk(v: str, acc: list[str], used: set[str]):
        if v == t:
            out.append(Path(tuple(acc), s))
            return
        for e in sorted(g.out_edges(v), key=lambda e: e.id):
            if e.id in banned or e.id in used:
                continue
            used.add(e.id)
            acc.append(e.id)
            walk(e.head, acc, used)
            acc.pop()
            used.discard(e.id)

    walk(s, [], set())
    return out


def enumerate_systems(g: Dag, pair: PairSpec, budget: int = 10**6):
    """Yield every maximum edge-disjoint path system for the pair exactly once.

    Systems are unordered path sets, emitted with paths sorted lexicographically
    and chosen in ascending order so no set repeats.
    """
    if not g.acyclic:
        raise CyclicInput("system enumeration needs an acyclic graph")
    c = min_cut(g, pair.source, pair.sink)
    if c == 0:
        return
    paths = _all_paths(g, pair.source, pair.sink, frozenset())
    yielded = 0

    def extend(chosen: list[Path], used: set[str], start: int):
        nonlocal yielded
        if len(chosen) == c:
            yielded += 1
            if yielded > budget:
                raise BudgetExceeded(
                    f"more than {budget} systems for pair {pair.index}"
                )
            yield PathSystem(pair, tuple(chosen))
            return
        for k in range(start, len(paths)):
            p = paths[k]
            if used & set(p.edges):
                continue
            chosen.append(p)
            used |= set(p.edges)
            yield from extend(chosen, used, k + 1)
            chosen.pop()
            used -= set(p.edges)

    yield from extend([], set(), 0)


def count_systems_by_peeling(g: Dag, pair: PairSpec) -> int:
    """Independent system count: ordered tuples by recursive first-path removal,
    divided by c!. Cross-checks the enumeration stream in tests."""
    c = min_cut(g, pair.source, pair.sink)

    def tuples(banned: frozenset[str], k: int) -> int:
        if k == 0:
            return 1
        total = 0
        for p in _all_paths(g, pair.source, pair.sink, banned):
            total += tuples(banned | frozenset(p.edges), k - 1)
        return total

    total = tuples(frozenset(), c)
    fact = 1
    for i in range(2, c + 1):
        fact *= i
    assert total % fact == 0
    return total // fact


def _search(per_pair: list[list[PathSystem]], prefix: list[PathSystem], best: list):
    """Depth-first product search with branch-and-bound pruning."""
    depth = len(prefix)
    partial = len(merging_edges([p for s in prefix for p in s.paths]))
    if partial >= best[0]:
        return
    if depth == len(per_pair):
        best[0] = partial
        best[1] = tuple(prefix)
        return
    for cand in per_pair[depth]:
        prefix.append(cand)
        _search(per_pair, prefix, best)
        prefix.pop()


def _chunk_min(args):
    sentinel, per_pair_rest, first = args
    best: list = [sentinel, None]
    _search([[first]] + per_pair_rest, [], best)
    return best[0], best[1]


def brute_force_min(
    g: Dag, pairs, budget: int = 10**6, jobs: int = 1
) -> OracleResult:
    """Exact minimum of count_mergings over all per-pair system choices."""
    start = time.perf_counter()
    pairs = sorted(pairs, key=lambda p: p.index)
    per_pair: list[list[PathSystem]] = []
    enumerated = 0
    for pair in pairs:
        systems = list(enumerate_systems(g, pair, budget=budget))
        enumerated += len(systems)
        per_pair.append(systems)
    product = 1
    for systems in per_pair:
        product *= len(systems)
        if product > budget:
            raise BudgetExceeded(f"system product exceeds budget {budget}")
    # widest choice first is usually the best pruning order; keep index order
    # within the report, search order sorted by branching factor
    order = sorted(range(len(per_pair)), key=lambda i: (len(per_pair[i]), i))
    searched = [per_pair[i] for i in order]
    sentinel = len(g.edges) + 1
    best: list = [sentinel, None]
    if jobs > 1 and searched and len(searched[0]) > 1:
        tasks = [(sentinel, searched[1:], first) for first in searched[0]]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for value, witness in pool.map(_chunk_min, tasks):
                if witness is not None and value < best[0]:
                    best = [value, witness]
    else:
        _search(searched, [], best)
    if best[1] is None:
        raise BudgetExceeded("oracle search found no witness")
    by_index = {s.pair.index: s for s in best[1]}
    witness = tuple(by_index[p.index] for p in pairs)
    return OracleResult(
        value=best[0],
        witness=witness,
        systems_enumerated=enumerated,
        elapsed=time.perf_counter() - start,
    )
