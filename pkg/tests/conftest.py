import pytest

from pathmerge.graph import Dag, Edge, PairSpec


@pytest.fixture
def chain3():
    """u -> v -> w -> x chain."""
    return Dag(
        ["u", "v", "w", "x"],
        [Edge("e1", "u", "v"), Edge("e2", "v", "w"), Edge("e3", "w", "x")],
    )


@pytest.fixture
def butterfly():
    from pathmerge.generators import gen_butterfly

    return gen_butterfly()


@pytest.fixture
def parallel_pair():
    """Two parallel s->t edges plus a two-hop detour."""
    return Dag(
        ["s", "m", "t"],
        [
            Edge("a", "s", "t"),
            Edge("b", "s", "t"),
            Edge("c", "s", "m"),
            Edge("d", "m", "t"),
        ],
    ), PairSpec("s", "t", 1)
