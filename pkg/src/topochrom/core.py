"""Graph and coloring primitives shared by every other module.

Graphs are finite and simple (symmetric, irreflexive adjacency) with
printable vertex labels.  Adjacency is stored as one Python int per
vertex, used as a bit set over vertex indices; all walk and neighborhood
machinery operates on these rows.  Graphs and colorings are immutable
after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Graph",
    "Coloring",
    "LocalProfile",
    "bits",
    "is_proper",
    "first_monochromatic_edge",
    "local_profile",
    "walk_reachability",
    "is_s_wide",
    "wide_via_neighborhoods",
    "Fraction",
]


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple graph with labelled vertices and bit-set adjacency rows."""

    __slots__ = ("labels", "adj", "n", "m", "_index")

    def __init__(self, labels: Sequence[str], adj: Sequence[int]):
        labels = tuple(str(x) for x in labels)
        adj = tuple(int(row) for row in adj)
        n = len(labels)
        if len(adj) != n:
            raise ValueError(f"{len(adj)} adjacency rows for {n} labels")
        if len(set(labels)) != n:
            raise ValueError("vertex labels are not pairwise distinct")
        full = (1 << n) - 1
        m2 = 0
        for i, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"adjacency row {i} references missing vertices")
            if (row >> i) & 1:
                raise ValueError(f"loop at vertex {i} ({labels[i]}); graphs are simple")
            m2 += row.bit_count()
        for i, row in enumerate(adj):
            for j in bits(row):
                if not (adj[j] >> i) & 1:
                    raise ValueError(f"adjacency not symmetric at ({i},{j})")
        self.labels = labels
        self.adj = adj
        self.n = n
        self.m = m2 // 2
        self._index = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[tuple[int, int]]) -> "Graph":
        n = len(labels)
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop edge ({u},{v}) rejected")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(labels, adj)

    def index_of(self, label: str) -> int:
        return self._index[label]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            row = self.adj[u] >> (u + 1)
            for off in bits(row):
                yield (u, u + 1 + off)

    def without_edge(self, u: int, v: int) -> "Graph":
        """Copy of the graph with one edge removed."""
        if not self.has_edge(u, v):
            raise ValueError(f"({u},{v}) is not an edge")
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph(self.labels, adj)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.labels == other.labels
            and self.adj == other.adj
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Coloring:
    """Total map vertex index -> integer color.  Colors may be negative."""

    graph: Graph
    colors: tuple[int, ...]

    def __post_init__(self):
        if len(self.colors) != self.graph.n:
            raise ValueError(
                f"coloring covers {len(self.colors)} vertices, graph has {self.graph.n}"
            )
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))

    @property
    def palette(self) -> frozenset[int]:
        return frozenset(self.colors)

    def color_of(self, label: str) -> int:
        return self.colors[self.graph.index_of(label)]

    def classes(self) -> dict[int, int]:
        """Color -> bit set of vertices with that color."""
        out: dict[int, int] = {}
        for v, c in enumerate(self.colors):
            out[c] = out.get(c, 0) | (1 << v)
        return out

    def relabel(self) -> tuple["Coloring", dict[int, int]]:
        """Renumber colors to 1..t in increasing color order; returns the map."""
        order = {c: i + 1 for i, c in enumerate(sorted(self.palette))}
        return Coloring(self.graph, tuple(order[c] for c in self.colors)), order


@dataclass(frozen=True)
class LocalProfile:
    """Per-vertex count of distinct neighbor colors, and the +1 maximum."""

    per_vertex: tuple[int, ...]
    max_plus_one: int


def _check_same_graph(g: Graph, c: Coloring) -> None:
    if c.graph is not g and c.graph != g:
        mine = set(g.labels)
        theirs = set(c.graph.labels)
        odd = sorted(mine ^ theirs)
        hint = f"; first mismatched vertex: {odd[0]}" if odd else ""
        raise ValueError(f"coloring belongs to a different graph{hint}")


def is_proper(g: Graph, c: Coloring) -> bool:
    """True iff no edge of ``g`` is monochromatic under ``c``."""
    _check_same_graph(g, c)
    return first_monochromatic_edge(g, c) is None


def first_monochromatic_edge(g: Graph, c: Coloring) -> tuple[int, int] | None:
    _check_same_graph(g, c)
    for color, mask in c.classes().items():
        for v in bits(mask):
            bad = g.adj[v] & mask
            if bad:
                u = next(bits(bad))
                return (min(u, v), max(u, v))
    return None


def local_profile(g: Graph, c: Coloring) -> LocalProfile:
    """Distinct-neighbor-color counts; requires a proper coloring.

    When ``c`` is proper, ``max_plus_one`` witnesses an upper bound for the
    local chromatic number of ``g``.
    """
    edge = first_monochromatic_edge(g, c)
    if edge is not None:
        u, v = edge
        raise ValueError(
            f"coloring is not proper: edge ({g.labels[u]},{g.labels[v]}) "
            f"is monochromatic with color {c.colors[u]}"
        )
    per = tuple(len({c.colors[u] for u in g.neighbors(v)}) for v in range(g.n))
    return LocalProfile(per, 1 + max(per, default=0))


def _neighborhood_of_set(g: Graph, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= g.adj[v]
    return out


def _bool_mat_mult(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = []
    for row in a:
        acc = 0
        for j in bits(row):
            acc |= b[j]
        out.append(acc)
    return out


def walk_reachability(g: Graph, length: int) -> list[int]:
    """Bit-set rows R with R[u] bit w set iff a walk of exactly ``length``
    edges joins u and w.  Computed as the boolean adjacency power A^length.

    Walks may repeat vertices and edges.
    """
    if length < 1:
        raise ValueError("walk length must be >= 1")
    result: list[int] | None = None
    base = list(g.adj)
    e = length
    while e:
        if e & 1:
            result = base if result is None else _bool_mat_mult(result, base)
        e >>= 1
        if e:
            base = _bool_mat_mult(base, base)
    assert result is not None
    return result


def is_s_wide(g: Graph, c: Coloring, s: int) -> bool:
    """True iff no two equally colored (possibly equal) vertices are joined
    by a walk of exactly 2s-1 edges.  s=1 coincides with properness; s=3 is
    the plain "wide" condition (walks of length 5).
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    _check_same_graph(g, c)
    steps = 2 * s - 1
    for mask in c.classes().values():
        reach = mask
        for _ in range(steps):
            reach = _neighborhood_of_set(g, reach)
            if not reach:
                break
        if reach & mask:
            return False
    return True


def wide_via_neighborhoods(g: Graph, c: Coloring) -> bool:
    """Independent characterization of 3-wideness: the coloring is proper and,
    for every color class, both its neighborhood and its second neighborhood
    are independent sets."""
    if not is_proper(g, c):
        return False
    for mask in c.classes().values():
        n1 = _neighborhood_of_set(g, mask)
        for v in bits(n1):
            if g.adj[v] & n1:
                return False
        n2 = _neighborhood_of_set(g, n1)
        for v in bits(n2):
            if g.adj[v] & n2:
                return False
    return True
