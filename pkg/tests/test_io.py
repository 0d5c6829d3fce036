import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph
from topochrom.core import Coloring, Graph
from topochrom.families import cycle, schrijver
from topochrom.io import (
    ParseError,
    coloring_from_obj,
    coloring_to_obj,
    from_dimacs,
    graph_from_obj,
    graph_to_obj,
    hom_from_obj,
    hom_to_obj,
    to_dimacs,
)


def test_c5_dimacs_roundtrip():
    g = cycle(5)
    text = to_dimacs(g)
    assert text.startswith("p edge 5 5\n")
    back = from_dimacs(text)
    assert back.n == g.n and set(back.edges()) == set(g.edges())


def test_sg62_json_roundtrip():
    g = schrijver(6, 2)
    assert g.n == 9 and g.m == 18  # disjoint stable pairs, by enumeration
    back = graph_from_obj(graph_to_obj(g))
    assert back == g


def test_edgeless_roundtrip():
    g = Graph(["x", "y", "z"], [0, 0, 0])
    assert graph_from_obj(graph_to_obj(g)) == g
    back = from_dimacs(to_dimacs(g))
    assert back.n == 3 and back.m == 0


def test_dimacs_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 2"):
        from_dimacs("p edge 3 1\ne 1 9\n")
    with pytest.raises(ParseError, match="line 1"):
        from_dimacs("e 1 2\n")
    with pytest.raises(ParseError, match="problem line"):
        from_dimacs("c only a comment\n")


def test_coloring_roundtrip():
    g = cycle(5)
    c = Coloring(g, (1, 2, 1, 2, 3))
    back = coloring_from_obj(coloring_to_obj(c), g)
    assert back.colors == c.colors


def test_coloring_missing_vertex():
    g = cycle(3)
    with pytest.raises(ParseError, match="misses vertex"):
        coloring_from_obj({"colors": {"0": 1, "1": 2}}, g)


def test_hom_roundtrip():
    g = cycle(9)
    h = cycle(3)
    mapping = {v: v % 3 for v in range(9)}
    back = hom_from_obj(hom_to_obj(g, h, mapping), g, h)
    assert back == mapping


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 10_000))
def test_random_graph_roundtrips(n, seed):
    import random

    g = random_graph(n, 0.4, random.Random(seed))
    assert graph_from_obj(graph_to_obj(g)) == g
    back = from_dimacs(to_dimacs(g))
    assert back.n == g.n and set(back.edges()) == set(g.edges())
