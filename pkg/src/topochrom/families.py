"""Constructors for every graph family used by the colorings and solvers.

Vertex-ordering conventions (all constructors are deterministic):

* subset vertices (Kneser/stable-Kneser) are ordered colexicographically;
* generalized Mycielski vertices are ordered level-major, then base vertex;
* tuple vertices of the wide-colorability universal graphs are ordered
  lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .core import Graph

__all__ = [
    "complete",
    "cycle",
    "LoopedPath",
    "path_with_loop",
    "stable_subsets",
    "kneser",
    "schrijver",
    "schrijver_vertex_count",
    "gen_mycielski",
    "MycTower",
    "gen_mycielski_iter",
    "wide_universal",
    "wide_universal_vertices",
    "circular_complete",
    "borsuk_sample",
]

APEX = "*"


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete(n) needs n >= 1")
    full = (1 << n) - 1
    return Graph([str(i) for i in range(n)], [full ^ (1 << i) for i in range(n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle(n) needs n >= 3")
    return Graph.from_edges([str(i) for i in range(n)], [(i, (i + 1) % n) for i in range(n)])


@dataclass(frozen=True)
class LoopedPath:
    """Path 0-1-...-s with a loop at ``s``.  Not a simple Graph; used only
    as the coordinate factor of the wide-colorability universal graphs."""

    s: int

    def adjacent(self, a: int, b: int) -> bool:
        return abs(a - b) == 1 or (a == b == self.s)

    def edges(self) -> list[tuple[int, int]]:
        return [(i - 1, i) for i in range(1, self.s + 1)] + [(self.s, self.s)]


def path_with_loop(s: int) -> LoopedPath:
    if s < 1:
        raise ValueError("path_with_loop(s) needs s >= 1")
    return LoopedPath(s)


def _subset_label(subset: Sequence[int]) -> str:
    return "{" + ",".join(str(x) for x in subset) + "}"


def _colex_key(subset: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(subset, reverse=True))


def _path_stable_subsets(lo: int, hi: int, k: int) -> Iterator[tuple[int, ...]]:
    """k-subsets of {lo..hi} with no two consecutive elements."""
    if k == 0:
        yield ()
        return
    if hi - lo + 1 < 2 * k - 1:
        return
    for first in range(lo, hi - 2 * (k - 1) + 1):
        for rest in _path_stable_subsets(first + 2, hi, k - 1):
            yield (first,) + rest


def stable_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """All stable k-subsets of the cyclically ordered {1..n}: no two
    cyclically neighboring elements (and in particular never both 1 and n).
    Colexicographic order."""
    out: list[tuple[int, ...]] = []
    # split on whether 1 is chosen: if so, 2 and n are forbidden
    for rest in _path_stable_subsets(3, n - 1, k - 1):
        out.append((1,) + rest)
    out.extend(_path_stable_subsets(2, n, k))
    out.sort(key=_colex_key)
    return out


def _mask_of(subset: Sequence[int]) -> int:
    m = 0
    for x in subset:
        m |= 1 << x
    return m


def _disjointness_graph(subsets: list[tuple[int, ...]], n_ground: int) -> Graph:
    """Graph on the given subsets with edges between disjoint pairs."""
    labels = [_subset_label(s) for s in subsets]
    nv = len(subsets)
    if nv > 2000:
        return _disjointness_graph_numpy(subsets, labels, n_ground)
    masks = [_mask_of(s) for s in subsets]
    adj = [0] * nv
    for i in range(nv):
        mi = masks[i]
        row = 0
        for j in range(i + 1, nv):
            if not (mi & masks[j]):
                row |= 1 << j
        adj[i] |= row
        for j in bits_of(row):
            adj[j] |= 1 << i
    return Graph(labels, adj)


def bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _disjointness_graph_numpy(
    subsets: list[tuple[int, ...]], labels: list[str], n_ground: int
) -> Graph:
    nv = len(subsets)
    member = np.zeros((nv, n_ground), dtype=np.float32)
    for i, s in enumerate(subsets):
        for x in s:
            member[i, x - 1] = 1.0
    adj = [0] * nv
    block = 2048
    for start in range(0, nv, block):
        stop = min(start + block, nv)
        overlap = member[start:stop] @ member.T  # inner products count shared elements
        disjoint = overlap < 0.5
        idx = np.arange(start, stop)
        disjoint[np.arange(stop - start), idx] = False
        packed = np.packbits(disjoint, axis=1, bitorder="little")
        for r in range(stop - start):
            adj[start + r] = int.from_bytes(packed[r].tobytes(), "little")
    return Graph(labels, adj)


def kneser(n: int, k: int) -> Graph:
    """All k-subsets of {1..n}; edges join disjoint pairs."""
    if k < 1 or n < 2 * k:
        raise ValueError(f"kneser needs n >= 2k >= 2, got n={n}, k={k}")
    from itertools import combinations

    subs = sorted(combinations(range(1, n + 1), k), key=_colex_key)
    return _disjointness_graph(subs, n)


def schrijver_vertex_count(n: int, k: int) -> int:
    return n * comb(n - k - 1, k - 1) // k


def schrijver(n: int, k: int) -> Graph:
    """Induced subgraph of kneser(n, k) on the stable k-subsets."""
    if k < 1 or n < 2 * k:
        raise ValueError(f"schrijver needs n >= 2k >= 2, got n={n}, k={k}")
    subs = stable_subsets(n, k)
    expected = schrijver_vertex_count(n, k)
    if len(subs) != expected:
        raise AssertionError(
            f"stable subset count {len(subs)} != (n/k)*C(n-k-1,k-1) = {expected}"
        )
    return _disjointness_graph(subs, n)


def gen_mycielski(g: Graph, r: int) -> Graph:
    """Level 0 keeps the edges of ``g`` (the looped end of the path factor);
    levels l and l' are cross-connected along edges of ``g`` when |l-l'| <= 1;
    level r collapses to a single apex adjacent to all of level r-1.
    """
    if r < 1:
        raise ValueError("gen_mycielski needs r >= 1")
    if g.n == 0:
        raise ValueError("gen_mycielski needs a non-empty base graph")
    nv = r * g.n + 1
    labels = [f"({lvl}|{lab})" for lvl in range(r) for lab in g.labels] + ["z"]
    apex = nv - 1
    edges: list[tuple[int, int]] = []
    for u, v in g.edges():
        edges.append((u, v))
        for lvl in range(r - 1):
            base, nxt = lvl * g.n, (lvl + 1) * g.n
            edges.append((base + u, nxt + v))
            edges.append((base + v, nxt + u))
    top = (r - 1) * g.n
    edges.extend((apex, top + v) for v in range(g.n))
    return Graph.from_edges(labels, edges)


@dataclass(frozen=True)
class MycTower:
    """Iterated generalized Mycielskian together with its coordinate labels.

    Vertex i of ``graph`` carries ``coords[i]`` = (a_1,...,a_d) over
    {0..r_j} or None, and ``base[i]`` = base-vertex index or None, in the
    normal form: the first coordinate is the level of the outermost
    application; once a_j reaches its cap r_j, all later coordinates and
    the base vertex are None (that vertex is the apex of application j).
    """

    graph: Graph
    r: tuple[int, ...]
    coords: tuple[tuple[int | None, ...], ...]
    base: tuple[int | None, ...]
    base_graph: Graph


def _tower_vertices(r: Sequence[int], n_base: int) -> list[tuple[tuple[int | None, ...], int | None]]:
    d = len(r)
    out: list[tuple[tuple[int | None, ...], int | None]] = []

    def rec(prefix: tuple[int | None, ...], j: int) -> None:
        if j == d:
            for u in range(n_base):
                out.append((prefix, u))
            return
        for lvl in range(r[j]):
            rec(prefix + (lvl,), j + 1)
        out.append((prefix + (r[j],) + (None,) * (d - j - 1), None))

    rec((), 0)
    out.sort(key=lambda cu: tuple(
        (x if x is not None else 1 << 30) for x in cu[0]
    ) + ((cu[1] if cu[1] is not None else 1 << 30),))
    return out


def _tower_label(coords: tuple[int | None, ...], u: int | None, base_labels: Sequence[str]) -> str:
    parts = [APEX if a is None else str(a) for a in coords]
    tail = APEX if u is None else base_labels[u]
    return "(" + ",".join(parts) + "|" + tail + ")"


def gen_mycielski_iter(g: Graph, r: Sequence[int]) -> MycTower:
    """d-fold generalized Mycielski tower over ``g`` with level caps ``r``.

    Adjacency is coordinatewise: two vertices are adjacent iff their base
    vertices are adjacent in ``g`` (an apex coordinate None acts as a
    wildcard) and every coordinate pair is adjacent in the level path
    (|a-b| = 1, or a = b = 0 at the looped end, or one of them None).
    The resulting graph is isomorphic to iterating ``gen_mycielski`` with
    the caps taken innermost-last.
    """
    r = tuple(int(x) for x in r)
    if any(x < 1 for x in r):
        raise ValueError("all level caps must be >= 1")
    if not r:
        return MycTower(g, (), tuple(((),) * g.n), tuple(range(g.n)), g)
    verts = _tower_vertices(r, g.n)
    labels = [_tower_label(cu[0], cu[1], g.labels) for cu in verts]
    nv = len(verts)
    d = len(r)

    def coord_ok(a: int | None, b: int | None) -> bool:
        if a is None or b is None:
            return True
        return abs(a - b) == 1 or a == b == 0

    edges = []
    for i in range(nv):
        ci, ui = verts[i]
        for j in range(i + 1, nv):
            cj, uj = verts[j]
            if ui is not None and uj is not None and not g.has_edge(ui, uj):
                continue
            if all(coord_ok(ci[t], cj[t]) for t in range(d)):
                edges.append((i, j))
    graph = Graph.from_edges(labels, edges)
    expected = g.n
    for cap in reversed(r):
        expected = cap * expected + 1
    assert graph.n == expected, f"tower vertex count {graph.n} != {expected}"
    return MycTower(
        graph,
        r,
        tuple(cu[0] for cu in verts),
        tuple(cu[1] for cu in verts),
        g,
    )


def wide_universal_vertices(s: int, t: int) -> list[tuple[int, ...]]:
    """Vertex tuples of the s-wide universal graph in lexicographic order:
    words over {0..s} of length t with exactly one 0 and at least one 1."""
    if s < 1:
        raise ValueError("wide_universal needs s >= 1")
    if t < 2:
        raise ValueError("wide_universal needs t >= 2")
    verts: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], zeros: int, ones: int) -> None:
        pos = len(prefix)
        if pos == t:
            if zeros == 1 and ones >= 1:
                verts.append(prefix)
            return
        if zeros > 1:
            return
        for val in range(s + 1):
            rec(prefix + (val,), zeros + (val == 0), ones + (val == 1))

    rec((), 0, 0)
    verts.sort()
    return verts


def wide_universal(s: int, t: int) -> Graph:
    """Universal graph for s-wide t-colorability: tuples over {0..s} with
    exactly one 0 and at least one 1, adjacent when every coordinate pair is
    an edge of the path 0-1-...-s with a loop at s."""
    h = path_with_loop(s)
    verts = wide_universal_vertices(s, t)
    labels = ["(" + ",".join(map(str, v)) + ")" for v in verts]
    edges = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if all(h.adjacent(a, b) for a, b in zip(verts[i], verts[j])):
                edges.append((i, j))
    return Graph.from_edges(labels, edges)


def circular_complete(p: int, q: int) -> Graph:
    """Vertices 0..p-1, i ~ j iff q <= |i-j| <= p-q."""
    if q < 1 or p < 2 * q:
        raise ValueError(f"circular_complete needs p >= 2q >= 2, got p={p}, q={q}")
    labels = [str(i) for i in range(p)]
    edges = []
    for i in range(p):
        for j in range(i + 1, p):
            if q <= j - i <= p - q:
                edges.append((i, j))
    return Graph.from_edges(labels, edges)


def borsuk_sample(
    n: int, alpha: float, points: Sequence[Sequence[float]], tie_tol: float = 1e-12
) -> Graph:
    """Finite induced subgraph of the Borsuk graph on the given points of the
    unit sphere in R^n: edges join pairs at Euclidean distance >= alpha.
    Distance ties at alpha count as edges (within ``tie_tol``)."""
    if not 0 < alpha < 2:
        raise ValueError("borsuk_sample needs 0 < alpha < 2")
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return Graph([], [])
    if pts.ndim != 2 or pts.shape[1] != n:
        raise ValueError(f"points must be vectors in R^{n}")
    norms = np.linalg.norm(pts, axis=1)
    off = np.nonzero(np.abs(norms - 1.0) > 1e-9)[0]
    if off.size:
        i = int(off[0])
        raise ValueError(f"point {i} is off the unit sphere (|norm-1| = {abs(norms[i]-1):.3g})")
    labels = [f"p{i}" for i in range(len(pts))]
    gram = pts @ pts.T
    d2 = np.maximum(2.0 - 2.0 * gram, 0.0)
    thresh = alpha * alpha - tie_tol
    adjmat = d2 >= thresh
    np.fill_diagonal(adjmat, False)
    packed = np.packbits(adjmat, axis=1, bitorder="little")
    adj = [int.from_bytes(packed[i].tobytes(), "little") for i in range(len(pts))]
    return Graph(labels, adj)
