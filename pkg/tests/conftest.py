import random

import networkx as nx
import pytest

from topochrom.core import Coloring, Graph


def to_nx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges())
    return out


def isomorphic(a: Graph, b: Graph) -> bool:
    return nx.is_isomorphic(to_nx(a), to_nx(b))


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges([str(i) for i in range(n)], edges)


def brute_walk_pairs(g: Graph, length: int) -> set[tuple[int, int]]:
    """Walk reachability by explicit walk enumeration (oracle for tiny graphs)."""
    pairs = set()

    def extend(v: int, steps: int, target_len: int, start: int):
        if steps == target_len:
            pairs.add((start, v))
            return
        for u in g.neighbors(v):
            extend(u, steps + 1, target_len, start)

    for s in range(g.n):
        extend(s, 0, length, s)
    return pairs


def brute_is_wide(g: Graph, c: Coloring, s: int) -> bool:
    """Wideness by walk enumeration: no equally colored endpoints of any
    (2s-1)-walk."""
    return all(
        c.colors[u] != c.colors[w] for (u, w) in brute_walk_pairs(g, 2 * s - 1)
    )


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
