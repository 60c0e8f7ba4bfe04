import pytest

from pathmerge import edgelist
from pathmerge.errors import ParseError
from pathmerge.generators import (
    gen_butterfly,
    gen_cyclic_counterexample,
    gen_star_2rep,
)


def test_parse_pair_form():
    g, pairs = edgelist.parse(
        """
        # a comment
        pair S1 R1
        pair S2 R2
        edge e1 S1 m
        edge e2 m R1
        edge e3 S2 m   # trailing comment
        edge e4 m R2
        """
    )
    assert len(pairs) == 2 and pairs[0].index == 1
    assert len(g.edges) == 4


def test_parse_single_source_form():
    g, pairs = edgelist.parse("source S\nsink R1\nsink R2\nedge a S R1\nedge b S R2\n")
    assert {p.source for p in pairs} == {"S"}
    assert [p.sink for p in pairs] == ["R1", "R2"]


@pytest.mark.parametrize(
    "text",
    [
        "pair S R\nsource S\nsink R\nedge a S R",
        "sink R\nedge a S R",
        "edge a S",
        "pair S S\nedge a S b",
        "edge a S R\nedge a S R\npair S R",
        "unknown-directive x",
    ],
)
def test_parse_rejects_bad_input(text):
    with pytest.raises(ParseError):
        edgelist.parse(text)


@pytest.mark.parametrize(
    "inst",
    [gen_butterfly(), gen_star_2rep(3), gen_cyclic_counterexample(2)],
    ids=["butterfly", "star2rep3", "cyclic2"],
)
def test_round_trip_is_structure_identical(inst):
    text = edgelist.serialize(inst.graph, inst.pairs)
    g2, pairs2 = edgelist.parse(text)
    assert g2 == inst.graph
    assert pairs2 == inst.pairs
    assert edgelist.serialize(g2, pairs2) == text


def test_cyclic_flag_round_trips():
    inst = gen_cyclic_counterexample(1)
    text = edgelist.serialize(inst.graph, inst.pairs)
    assert "cyclic-allowed" in text
    g2, _ = edgelist.parse(text)
    assert g2.cyclic_allowed and not g2.acyclic


def test_isolated_vertex_round_trips():
    from pathmerge.graph import Dag, Edge, PairSpec

    g = Dag(["s", "t", "lonely"], [Edge("e", "s", "t")])
    text = edgelist.serialize(g, [PairSpec("s", "t", 1)])
    assert "vertex lonely" in text
    g2, _ = edgelist.parse(text)
    assert g2 == g
