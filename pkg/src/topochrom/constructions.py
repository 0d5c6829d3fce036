"""Explicit colorings and homomorphisms for the graph families, each one
re-verified by the independent checkers in :mod:`topochrom.core` — no
construction is trusted.

The interval colorings of stable Kneser graphs, the recoloring that turns a
wide coloring into one with a small local profile, the level colorings of
generalized Mycielski towers, the canonical and edge-deleted colorings of
the wide-colorability universal graphs W(s,t), and the homomorphism chain
behind the circular-chromatic gap for odd-chromatic stable Kneser graphs
all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .core import Coloring, Graph, bits, first_monochromatic_edge, is_proper, is_s_wide, local_profile
from .families import (
    MycTower,
    complete,
    gen_mycielski,
    gen_mycielski_iter,
    schrijver,
    stable_subsets,
    wide_universal,
    wide_universal_vertices,
)

__all__ = [
    "IntervalPartition",
    "sg_interval_coloring",
    "troublesome_vertices",
    "widen_to_local",
    "RefinedColoringResult",
    "sg_refined_coloring",
    "gmyc_wide_extension",
    "gmyc_direct_coloring",
    "mycielski_psi_coloring",
    "w_canonical_coloring",
    "w_edge_deleted_coloring",
    "Homomorphism",
    "compose",
    "hom_from_swide",
    "w_to_gmyc_hom",
    "PipelineError",
    "PipelineResult",
    "oddsch_pipeline",
]


@dataclass(frozen=True)
class IntervalPartition:
    """Partition of {1..n} into t intervals of odd sizes, with the unique
    maximal stable subset of each interval as its anchor: the first, third,
    ... elements, (size+1)/2 of them."""

    n: int
    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(sz < 1 or sz % 2 == 0 for sz in self.sizes):
            raise ValueError(f"interval sizes must be odd and positive: {self.sizes}")
        if sum(self.sizes) != self.n:
            raise ValueError(f"interval sizes {self.sizes} do not sum to n={self.n}")

    @property
    def intervals(self) -> list[tuple[int, ...]]:
        out = []
        start = 1
        for sz in self.sizes:
            out.append(tuple(range(start, start + sz)))
            start += sz
        return out

    @property
    def anchors(self) -> list[tuple[int, ...]]:
        return [iv[::2] for iv in self.intervals]


def sg_interval_coloring(
    n: int,
    k: int,
    sizes: tuple[int, ...],
    rule: str = "any-majority",
    graph: Graph | None = None,
) -> Coloring:
    """Interval coloring of the stable Kneser graph SG(n, k) with
    t = n-2k+2 colors.

    ``any-majority`` colors a vertex by the least interval index holding at
    least half of the interval (a counting argument guarantees one exists);
    ``smallest-anchor`` by the least index whose anchor it contains.  On
    stable vertices the two rules agree; both are exposed because the
    qualifying index is a free choice.
    """
    t = n - 2 * k + 2
    part = IntervalPartition(n, tuple(sizes))
    if len(part.sizes) != t:
        raise ValueError(f"need t = n-2k+2 = {t} intervals, got {len(part.sizes)}")
    if rule not in ("any-majority", "smallest-anchor"):
        raise ValueError(f"unknown rule {rule!r}")
    g = graph if graph is not None else schrijver(n, k)
    subsets = stable_subsets(n, k)
    if g.n != len(subsets):
        raise ValueError("graph is not SG(n,k) in canonical order")
    intervals = part.intervals
    anchors = part.anchors
    thresholds = [(len(iv) + 1) // 2 for iv in intervals]
    anchor_sets = [frozenset(a) for a in anchors]
    interval_sets = [frozenset(iv) for iv in intervals]
    colors = []
    for x in subsets:
        xs = frozenset(x)
        color = None
        for i in range(t):
            if rule == "any-majority":
                ok = len(xs & interval_sets[i]) >= thresholds[i]
            else:
                ok = anchor_sets[i] <= xs
            if ok:
                color = i + 1
                break
        assert color is not None, f"no qualifying interval for {x}; sizes invalid"
        colors.append(color)
    c = Coloring(g, tuple(colors))
    assert is_proper(g, c)
    return c


def troublesome_vertices(g: Graph, c0: Coloring) -> int:
    """Bit set of vertices seeing more than half of the palette among their
    neighbors."""
    t = len(c0.palette)
    mask = 0
    for v in range(g.n):
        if 2 * len({c0.colors[u] for u in g.neighbors(v)}) > t:
            mask |= 1 << v
    return mask


def widen_to_local(g: Graph, c0: Coloring) -> Coloring:
    """Recolor the neighbors of every troublesome vertex of a wide t-coloring
    to one fresh color; the result is proper with local profile at most
    t//2 + 2.  Wideness of ``c0`` is required (it makes the fresh class
    independent) and checked."""
    if not is_s_wide(g, c0, 3):
        raise ValueError("widen_to_local needs a wide (3-wide) base coloring")
    t = len(c0.palette)
    beta = max(c0.palette) + 1
    trouble = troublesome_vertices(g, c0)
    colors = list(c0.colors)
    for v in range(g.n):
        if g.adj[v] & trouble:
            colors[v] = beta
    c = Coloring(g, tuple(colors))
    assert is_proper(g, c)
    prof = local_profile(g, c)
    assert prof.max_plus_one <= t // 2 + 2, prof.max_plus_one
    for v in bits(trouble):
        assert {c.colors[u] for u in g.neighbors(v)} <= {beta}
    return c


@dataclass(frozen=True)
class RefinedColoringResult:
    coloring: Coloring
    proper: bool
    violating_edge: tuple[int, int] | None
    max_plus_one: int | None


def _refined_schedule_ok(t: int, m: int, sizes: tuple[int, ...]) -> bool:
    if m == 0:
        return True
    a = (
        t >= 2 * m + 3
        and sizes[t - 1] >= 1
        and sizes[t - 2] >= 2 * m + 3
        and all(sizes[j] >= 4 * m + 5 for j in range(t - 2))
    )
    b = (
        t >= 4 * m + 3
        and sizes[t - 1] >= 1
        and sizes[t - 2] >= 3
        and all(sizes[j] >= 5 for j in range(t - 2))
    )
    return a or b


def sg_refined_coloring(
    n: int,
    k: int,
    m: int,
    sizes: tuple[int, ...],
    graph: Graph | None = None,
) -> RefinedColoringResult:
    """Refined recoloring of the smallest-anchor interval coloring of
    SG(n, k), recoloring a vertex y to a fresh color exactly when some
    neighbor already sees at least b-2 colors smaller than the color of y,
    where b = t-m.  Every vertex then sees at most b-1 colors.

    Properness of the result is verified, not assumed; a violation is
    reported as a finding in the result, never raised.
    """
    t = n - 2 * k + 2
    sizes = tuple(sizes)
    if len(sizes) != t:
        raise ValueError(f"need {t} interval sizes, got {len(sizes)}")
    if m < 0:
        raise ValueError("m must be >= 0")
    if not _refined_schedule_ok(t, m, sizes):
        raise ValueError(f"sizes {sizes} fit no supported schedule for m={m}")
    c0 = sg_interval_coloring(n, k, sizes, rule="smallest-anchor", graph=graph)
    g = c0.graph
    if m == 0:
        prof = local_profile(g, c0)
        return RefinedColoringResult(c0, True, None, prof.max_plus_one)
    b = t - m
    beta = t + 1
    neighbor_colors = [
        frozenset(c0.colors[u] for u in g.neighbors(v)) for v in range(g.n)
    ]
    colors = list(c0.colors)
    for y in range(g.n):
        cy = c0.colors[y]
        for x in g.neighbors(y):
            if sum(1 for col in neighbor_colors[x] if col < cy) >= b - 2:
                colors[y] = beta
                break
    c = Coloring(g, tuple(colors))
    edge = first_monochromatic_edge(g, c)
    if edge is not None:
        return RefinedColoringResult(c, False, edge, None)
    prof = local_profile(g, c)
    assert prof.max_plus_one <= b, (prof.max_plus_one, b)
    return RefinedColoringResult(c, True, None, prof.max_plus_one)


def gmyc_wide_extension(g: Graph, c0: Coloring, r: int) -> Coloring:
    """Wide (t+1)-coloring of the r-level generalized Mycielskian of a
    widely t-colored graph, r >= 7: one fresh color on the levels at
    distance 3, 5 and 7 from the looped end, the base coloring elsewhere.
    Levels beyond 7 are first collapsed by the homomorphism
    level -> max(0, level-(r-7)).  The output is re-checked for wideness."""
    if r < 7:
        raise ValueError("gmyc_wide_extension needs r >= 7")
    if not is_s_wide(g, c0, 3):
        raise ValueError("base coloring must be wide (3-wide)")
    my = gen_mycielski(g, r)
    gamma = max(c0.palette) + 1
    colors = []
    for lvl in range(r):
        collapsed = max(0, lvl - (r - 7))
        for v in range(g.n):
            colors.append(gamma if collapsed in (3, 5, 7) else c0.colors[v])
    colors.append(gamma)  # apex sits at level r -> collapsed level 7
    c = Coloring(my, tuple(colors))
    assert is_s_wide(my, c, 3)
    return c


def gmyc_direct_coloring(
    r: tuple[int, ...],
    base: str | tuple[Graph, Coloring] = "K2",
    refine_even_d: bool = False,
) -> Coloring:
    """Direct coloring of the d-fold generalized Mycielski tower, all level
    caps >= 4.

    The base graph coloring must use colors 0, -1, -2, ... with at most
    psi(base)-1 of them in any neighborhood.  Tower vertices keep their base
    color while all coordinates stay at most 2; otherwise the first
    coordinate >= 3 decides: an odd one contributes its position as a
    positive color, an even one the color 0.  Vertices with more than d/2
    odd coordinates are recolored to one fresh color; with
    ``refine_even_d`` (even d) the recoloring also grabs vertices with
    exactly d/2 odd coordinates whose base color is -1.
    """
    r = tuple(int(x) for x in r)
    d = len(r)
    if d == 0:
        raise ValueError("need at least one level cap")
    if any(x < 4 for x in r):
        raise ValueError("all level caps must be >= 4")
    if base == "K2":
        base_graph = complete(2)
        base_col = Coloring(base_graph, (0, -1))
    else:
        base_graph, base_col = base
        if any(col > 0 for col in base_col.colors):
            raise ValueError("base coloring must use non-positive colors")
        if not is_proper(base_graph, base_col):
            raise ValueError("base coloring must be proper")
    tower = gen_mycielski_iter(base_graph, r)
    beta = d + 1
    colors = []
    for coords, u in zip(tower.coords, tower.base):
        color = None
        for i, a in enumerate(coords):
            if a is None or a > 2:
                assert a is not None, "wildcard before any high coordinate"
                color = (i + 1) if a % 2 == 1 else 0
                break
        if color is None:
            assert u is not None
            color = base_col.colors[u]
        odd = sum(1 for a in coords if a is not None and a % 2 == 1)
        if 2 * odd > d:
            color = beta
        elif (
            refine_even_d
            and d % 2 == 0
            and 2 * odd == d
            and u is not None
            and base_col.colors[u] == -1
        ):
            color = beta
        colors.append(color)
    c = Coloring(tower.graph, tuple(colors))
    assert is_proper(tower.graph, c)
    return c


def mycielski_psi_coloring(g: Graph, c_prime: Coloring) -> Coloring:
    """Coloring of the Mycielskian copying the base coloring on level 0 and
    spending one fresh color on level 1 and another on the apex; its local
    profile exceeds the base profile by exactly one."""
    if not is_proper(g, c_prime):
        raise ValueError("base coloring must be proper")
    my = gen_mycielski(g, 2)
    alpha = max(c_prime.palette) + 1
    beta = alpha + 1
    colors = list(c_prime.colors) + [alpha] * g.n + [beta]
    c = Coloring(my, tuple(colors))
    assert is_proper(my, c)
    base_prof = local_profile(g, c_prime)
    prof = local_profile(my, c)
    assert prof.max_plus_one == base_prof.max_plus_one + 1
    return c


def w_canonical_coloring(s: int, t: int, graph: Graph | None = None) -> Coloring:
    """Color each vertex of W(s,t) by the position of its unique 0; the
    result is a proper s-wide t-coloring (re-checked)."""
    g = graph if graph is not None else wide_universal(s, t)
    verts = wide_universal_vertices(s, t)
    if g.n != len(verts):
        raise ValueError("graph is not W(s,t) in canonical order")
    colors = tuple(v.index(0) + 1 for v in verts)
    c = Coloring(g, colors)
    assert is_s_wide(g, c, s)
    return c


def _edge_deleted_colors(
    s: int,
    verts: list[tuple[int, ...]],
    x: tuple[int, ...],
    y: tuple[int, ...],
) -> dict[tuple[int, ...], int]:
    """Recursive (t-1)-coloring of W(s,t) that is proper once the edge
    {x,y} is removed.  Colors are 1..t-1; each recursion level reuses color
    1 as its alpha and introduces t-1 as its fresh beta."""
    t = len(x)
    if t == 2:
        return {v: 1 for v in verts}
    i = x.index(0)
    j = y.index(0)
    assert i != j and x[j] == 1 and y[i] == 1, "not an edge of W(s,t)"
    rcoord = next(r for r in range(t) if r not in (i, j))
    if y[rcoord] < x[rcoord]:
        x, y = y, x
    xr = x[rcoord]

    def drop(v: tuple[int, ...]) -> tuple[int, ...]:
        return v[:rcoord] + v[rcoord + 1 :]

    sub_verts = sorted({drop(v) for v in verts if _is_w_vertex(drop(v))})
    sub = _edge_deleted_colors(s, sub_verts, drop(x), drop(y))
    alpha = 1
    beta = t - 1
    out: dict[tuple[int, ...], int] = {}
    for z in verts:
        zr = z[rcoord]
        if zr < xr:
            out[z] = alpha if (xr - zr) % 2 == 0 else beta
        elif zr == xr == 1 and all(z[m] != 1 for m in range(t) if m != rcoord):
            out[z] = alpha
        elif zr > xr and all(z[m] == x[m] for m in range(t) if m != rcoord):
            out[z] = beta
        else:
            out[z] = sub[drop(z)]
    return out


def _is_w_vertex(v: tuple[int, ...]) -> bool:
    return v.count(0) == 1 and 1 in v


def w_edge_deleted_coloring(
    s: int, t: int, edge: tuple[int, int], graph: Graph | None = None
) -> Coloring:
    """Proper (t-1)-coloring of W(s,t) minus one edge, by the recursion that
    projects out a coordinate where neither endpoint is 0 and patches the
    projected coloring with one alternating fresh/reused color pattern.
    Properness on the edge-deleted graph is machine-verified."""
    g = graph if graph is not None else wide_universal(s, t)
    verts = wide_universal_vertices(s, t)
    if g.n != len(verts):
        raise ValueError("graph is not W(s,t) in canonical order")
    u, v = edge
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge of W({s},{t})")
    table = _edge_deleted_colors(s, verts, verts[u], verts[v])
    deleted = g.without_edge(u, v)
    c = Coloring(deleted, tuple(table[w] for w in verts))
    assert is_proper(deleted, c)
    assert len(c.palette) <= t - 1
    return c


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class Homomorphism:
    """Vertex map between two graphs with its edge-preservation certificate
    established at construction time."""

    source: Graph
    target: Graph
    mapping: tuple[int, ...]

    @classmethod
    def checked(cls, source: Graph, target: Graph, mapping) -> "Homomorphism":
        mp = tuple(mapping[v] for v in range(source.n)) if isinstance(mapping, dict) else tuple(mapping)
        if len(mp) != source.n:
            raise ValueError("mapping does not cover the source vertex set")
        for u, v in source.edges():
            if not target.has_edge(mp[u], mp[v]):
                raise ValueError(
                    f"edge ({source.labels[u]},{source.labels[v]}) maps to the "
                    f"non-edge ({target.labels[mp[u]]},{target.labels[mp[v]]})"
                )
        return cls(source, target, mp)

    def __call__(self, v: int) -> int:
        return self.mapping[v]


def compose(h1: Homomorphism, h2: Homomorphism) -> Homomorphism:
    """h2 after h1; the middle graphs must coincide."""
    if h1.target != h2.source:
        raise ValueError("compose: target of the first map is not the source of the second")
    return Homomorphism.checked(
        h1.source, h2.target, tuple(h2.mapping[a] for a in h1.mapping)
    )


def identity_hom(g: Graph) -> Homomorphism:
    return Homomorphism.checked(g, g, tuple(range(g.n)))


def _class_distances(g: Graph, class_mask: int) -> list[int]:
    """Multi-source BFS distance from every vertex to the given class;
    unreachable vertices get g.n (acts as infinity)."""
    inf = g.n
    dist = [inf] * g.n
    frontier = list(bits(class_mask))
    for v in frontier:
        dist[v] = 0
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for u in g.neighbors(v):
                if dist[u] > d:
                    dist[u] = d
                    nxt.append(u)
        frontier = nxt
    return dist


def hom_from_swide(g: Graph, c: Coloring, s: int) -> Homomorphism:
    """Homomorphism into W(s,t) from an s-wide t-coloring: coordinate i of
    the image of v is the distance from v to color class i, capped at s.
    Isolated vertices go to the lexicographically least W-vertex."""
    if not is_s_wide(g, c, s):
        raise ValueError("coloring is not s-wide; image may leave W(s,t)")
    relabeled, _ = c.relabel()
    t = len(relabeled.palette)
    target = wide_universal(s, t)
    verts = wide_universal_vertices(s, t)
    index = {v: i for i, v in enumerate(verts)}
    class_masks = [relabeled.classes()[i + 1] for i in range(t)]
    dists = [_class_distances(g, mask) for mask in class_masks]
    default = verts[0]
    mapping = []
    for v in range(g.n):
        if g.degree(v) == 0:
            mapping.append(index[default])
            continue
        word = tuple(min(s, dists[i][v]) for i in range(t))
        if word not in index:
            raise ValueError(f"image {word} of vertex {g.labels[v]} is not a W-vertex")
        mapping.append(index[word])
    return Homomorphism.checked(g, target, tuple(mapping))


def w_to_gmyc_hom(s: int, t: int) -> Homomorphism:
    """Homomorphism W(s,t) -> M_s(K_{t-1}): a vertex with last coordinate 0
    goes to the apex, any other to level s-x_t over the base vertex indexed
    by the position of its 0."""
    if t < 3:
        raise ValueError("w_to_gmyc_hom needs t >= 3")
    source = wide_universal(s, t)
    verts = wide_universal_vertices(s, t)
    target = gen_mycielski(complete(t - 1), s)
    apex = target.n - 1
    mapping = []
    for x in verts:
        if x[t - 1] == 0:
            mapping.append(apex)
        else:
            i = x.index(0)
            level = s - x[t - 1]
            mapping.append(level * (t - 1) + i)
    return Homomorphism.checked(source, target, tuple(mapping))


# ---------------------------------------------------------------------------
# circular-gap pipeline for odd-chromatic stable Kneser graphs


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage!r}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class PipelineResult:
    t: int
    i: int
    s: int
    n: int
    k: int
    p: int
    q: int
    value: Fraction  # p/q, the certified upper bound on chi_c(SG(n,k))
    coloring: Coloring  # verified (p,q)-coloring of SG(n,k)
    graph: Graph


def oddsch_pipeline(t: int, i: int, graph: Graph | None = None) -> PipelineResult:
    """Produce a verified (p,q)-coloring of a t-chromatic stable Kneser graph
    with p/q = t-1 + 1/i, certifying chi - chi_c >= 1 - 1/i for odd t.

    Chains: s-wide interval coloring with s = (t-1)(i-1)/2 + 1 on the
    smallest admissible n, the distance-word homomorphism into W(s,t), the
    level homomorphism into M_s(K_{t-1}), and a solver-found optimal
    circular coloring of that target.  Every stage is re-verified.
    """
    from .solvers import circular_chromatic

    if t < 3 or t % 2 == 0:
        raise ValueError("t must be odd and >= 3")
    if i < 2:
        raise ValueError("i must be >= 2")
    s = (t - 1) * (i - 1) // 2 + 1
    n = max(6 * (i - 1) * comb(t, 3) + t, (2 * s - 2) * t * t - (4 * s - 5) * t)
    assert (n - t) % 2 == 0
    k = (n - t + 2) // 2
    base = 2 * (s - 1) * (t - 2) + 1
    sizes = [base] * t
    sizes[-1] += n - base * t
    if sizes[-1] < 1 or sizes[-1] % 2 == 0:
        raise PipelineError("sizes", f"cannot split n={n} into {t} odd intervals")

    c0 = sg_interval_coloring(n, k, tuple(sizes), graph=graph)
    g = c0.graph
    if not is_s_wide(g, c0, s):
        raise PipelineError("wide-coloring", f"interval coloring is not {s}-wide")
    try:
        h1 = hom_from_swide(g, c0, s)
    except ValueError as exc:
        raise PipelineError("hom-to-W", str(exc)) from exc
    try:
        h2 = w_to_gmyc_hom(s, t)
    except ValueError as exc:
        raise PipelineError("hom-to-mycielski", str(exc)) from exc
    if h1.target != h2.source:
        raise PipelineError("hom-to-mycielski", "universal graphs do not line up")
    target = h2.target
    circ = circular_chromatic(target)
    expected = Fraction(t - 1) + Fraction(1, (2 * s - 2) // (t - 1) + 1)
    if not circ.exact or circ.value != expected:
        raise PipelineError(
            "circular-solve",
            f"chi_c of the Mycielski target is {circ.value}, expected {expected}",
        )
    chain = compose(h1, h2)
    colors = tuple(circ.coloring.colors[chain.mapping[v]] for v in range(g.n))
    coloring = Coloring(g, colors)
    p, q = circ.p, circ.q
    for u, v in g.edges():
        d = abs(colors[u] - colors[v])
        if not q <= d <= p - q:
            raise PipelineError(
                "pq-verify",
                f"edge ({g.labels[u]},{g.labels[v]}) violates q<=|dc|<=p-q",
            )
    return PipelineResult(t, i, s, n, k, p, q, Fraction(p, q), coloring, g)
