import pytest
from hypothesis import given, strategies as st

from pathmerge.errors import (
    CyclicInput,
    EdgeRepetition,
    EndpointMismatch,
    OrderViolation,
    UnknownVertex,
    VertexNotOnPath,
)
from pathmerge.graph import (
    Dag,
    Edge,
    Path,
    concat,
    is_acyclic,
    is_smaller,
    make_path,
    path_end,
    prefix_subgraph,
    subpath,
)


def test_single_edge_is_acyclic():
    g = Dag(["u", "v"], [Edge("e", "u", "v")])
    assert is_acyclic(g)


def test_two_cycle_rejected_unless_allowed():
    edges = [Edge("e1", "u", "v"), Edge("e2", "v", "u")]
    with pytest.raises(CyclicInput):
        Dag(["u", "v"], edges)
    g = Dag(["u", "v"], edges, cyclic_allowed=True)
    assert not is_acyclic(g)


def test_butterfly_is_acyclic(butterfly):
    assert is_acyclic(butterfly.graph)


def test_parallel_edges_have_distinct_ids():
    g = Dag(["u", "v"], [Edge("e1", "u", "v"), Edge("e2", "u", "v")])
    assert len(g.edges) == 2
    with pytest.raises(Exception):
        Dag(["u", "v"], [Edge("e1", "u", "v"), Edge("e1", "u", "v")])


def test_edge_endpoint_must_exist():
    with pytest.raises(UnknownVertex):
        Dag(["u"], [Edge("e", "u", "zz")])


def test_subpath_whole_and_degenerate(chain3):
    p = make_path(chain3, ["e1", "e2"])
    assert subpath(chain3, p, "u", "w") == p
    empty = subpath(chain3, p, "v", "v")
    assert empty.edges == () and empty.start == "v"
    assert subpath(chain3, make_path(chain3, ["e1", "e2", "e3"]), "v", "x").edges == ("e2", "e3")


def test_subpath_errors(chain3):
    p = make_path(chain3, ["e1", "e2"])
    with pytest.raises(VertexNotOnPath):
        subpath(chain3, p, "u", "x")
    with pytest.raises(OrderViolation):
        subpath(chain3, p, "w", "u")


def test_concat_basic(chain3):
    p = make_path(chain3, ["e1"])
    q = make_path(chain3, ["e2"])
    assert concat(chain3, p, q).edges == ("e1", "e2")
    empty = Path((), "v")
    assert concat(chain3, empty, q).edges == ("e2",)
    assert concat(chain3, q, Path((), "w")).edges == ("e2",)


def test_concat_errors(chain3):
    p = make_path(chain3, ["e1"])
    with pytest.raises(EndpointMismatch):
        concat(chain3, p, make_path(chain3, ["e3"]))
    with pytest.raises(EdgeRepetition):
        loopy = Dag(["u", "v", "w"], [Edge("x", "u", "v"), Edge("y", "v", "u")],
                    cyclic_allowed=True)
        concat(loopy, make_path(loopy, ["x", "y"]), make_path(loopy, ["x"]))


def test_is_smaller_empty_connector(chain3):
    p = make_path(chain3, ["e1"])
    q = make_path(chain3, ["e2"])
    assert is_smaller(chain3, p, q)
    assert is_smaller(chain3, p, Path((), "v"))
    # sink with out-degree 0 cannot reach anything upstream
    assert not is_smaller(chain3, make_path(chain3, ["e3"]), p)


def test_is_smaller_transitive_on_chain(chain3):
    paths = [make_path(chain3, [e]) for e in ("e1", "e2", "e3")]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                if is_smaller(chain3, paths[i], paths[j]) and is_smaller(
                    chain3, paths[j], paths[k]
                ):
                    assert is_smaller(chain3, paths[i], paths[k])


def test_prefix_subgraph_chain(chain3):
    sub = prefix_subgraph(chain3, ["v"])
    assert set(sub.vertices) == {"u", "v"}
    assert [e.id for e in sub.edges] == ["e1"]


def test_prefix_subgraph_whole_and_single(chain3):
    assert set(prefix_subgraph(chain3, ["x"]).vertices) == {"u", "v", "w", "x"}
    lone = prefix_subgraph(chain3, ["u"])
    assert set(lone.vertices) == {"u"} and not lone.edges
    with pytest.raises(UnknownVertex):
        prefix_subgraph(chain3, ["nope"])


def test_prefix_subgraph_monotone(butterfly):
    g = butterfly.graph
    small = set(prefix_subgraph(g, ["Y"]).vertices)
    bigger = set(prefix_subgraph(g, ["Y", "Z"]).vertices)
    assert small <= bigger


@given(st.integers(1, 6))
def test_subpath_splits_recombine(n):
    edges = [Edge(f"e{i}", f"v{i}", f"v{i+1}") for i in range(n)]
    g = Dag([f"v{i}" for i in range(n + 1)], edges)
    p = make_path(g, [e.id for e in edges])
    for m in range(n + 1):
        mid = f"v{m}"
        left = subpath(g, p, "v0", mid)
        right = subpath(g, p, mid, f"v{n}")
        assert concat(g, left, right) == p
    assert subpath(g, p, p.start, path_end(g, p)) == p
