"""Exact solvers: chromatic, local chromatic, fractional and circular
chromatic numbers, homomorphism search, and zig-zag biclique checking.

Every solver ships a certificate (coloring, weight vector, witness map)
that callers re-verify; budgets degrade to verified bounds, never to
guesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Iterator, Sequence

from .core import Coloring, Graph, bits, local_profile
from .lp import simplex_min

__all__ = [
    "UNKNOWN",
    "BudgetExceeded",
    "greedy_clique",
    "dsatur_greedy",
    "is_bipartite",
    "k_colorable",
    "chromatic_decision",
    "chromatic_number",
    "PsiResult",
    "psi_decision",
    "local_chromatic",
    "local_chromatic_exhaustive",
    "proper_partitions",
    "maximal_independent_sets",
    "fractional_chromatic",
    "find_hom",
    "CircularResult",
    "circular_chromatic",
    "ZigzagWitness",
    "zigzag_find",
    "zigzag_exhaustive",
    "ZigzagReport",
]


class _Unknown:
    __slots__ = ()

    def __repr__(self) -> str:
        return "UNKNOWN"

    def __bool__(self) -> bool:
        raise TypeError("UNKNOWN has no truth value; compare with `is UNKNOWN`")


#: Returned by budgeted searches that ran out of nodes: distinct from None,
#: which is a verified negative.
UNKNOWN = _Unknown()


class BudgetExceeded(Exception):
    pass


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int | None):
        self.left = limit

    def tick(self) -> None:
        if self.left is not None:
            self.left -= 1
            if self.left < 0:
                raise BudgetExceeded


def greedy_clique(g: Graph) -> list[int]:
    """A (not necessarily maximum) clique, greedily grown from each vertex
    in descending degree order; used as a chromatic lower bound."""
    best: list[int] = []
    order = sorted(range(g.n), key=g.degree, reverse=True)
    for start in order[: min(g.n, 40)]:
        clique = [start]
        cand = g.adj[start]
        while cand:
            v = max(bits(cand), key=lambda x: (g.adj[x] & cand).bit_count())
            clique.append(v)
            cand &= g.adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def is_bipartite(g: Graph) -> bool:
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if side[u] < 0:
                    side[u] = side[v] ^ 1
                    stack.append(u)
                elif side[u] == side[v]:
                    return False
    return True


def dsatur_greedy(g: Graph) -> Coloring:
    """Greedy DSATUR coloring; its palette size is an upper bound for chi."""
    colors = [-1] * g.n
    nmask = [0] * g.n  # bit set of colors present among colored neighbors
    for _ in range(g.n):
        v = max(
            (u for u in range(g.n) if colors[u] < 0),
            key=lambda u: (nmask[u].bit_count(), g.degree(u)),
        )
        c = 0
        while (nmask[v] >> c) & 1:
            c += 1
        colors[v] = c
        for u in g.neighbors(v):
            nmask[u] |= 1 << c
    return Coloring(g, tuple(c + 1 for c in colors))


def k_colorable(
    g: Graph, k: int, node_limit: int | None = None
) -> Coloring | None | _Unknown:
    """DSATUR branch-and-bound decision: a proper k-coloring or None.

    A greedy clique is pre-colored to break color symmetry; fresh colors are
    introduced in index order.
    """
    if k < 0:
        return None
    if g.n == 0:
        return Coloring(g, ())
    if k == 0:
        return None
    if k >= g.n:
        return Coloring(g, tuple(range(1, g.n + 1)))
    clique = greedy_clique(g)
    if len(clique) > k:
        return None
    colors = [-1] * g.n
    nmask = [0] * g.n
    used = 0
    for v in clique:
        colors[v] = used
        for u in g.neighbors(v):
            nmask[u] |= 1 << used
        used += 1
    budget = _Budget(node_limit)
    uncolored = [v for v in range(g.n) if colors[v] < 0]

    def rec(remaining: int, used: int) -> bool:
        budget.tick()
        if remaining == 0:
            return True
        v = -1
        best_sat = -1
        for u in uncolored:
            if colors[u] < 0:
                sat = nmask[u].bit_count()
                if sat > best_sat or (sat == best_sat and g.degree(u) > g.degree(v)):
                    best_sat, v = sat, u
        avail = ~nmask[v] & ((1 << min(k, used + 1)) - 1)
        for c in bits(avail):
            colors[v] = c
            touched = []
            for u in g.neighbors(v):
                if not (nmask[u] >> c) & 1:
                    nmask[u] |= 1 << c
                    touched.append(u)
            if rec(remaining - 1, max(used, c + 1)):
                return True
            for u in touched:
                nmask[u] &= ~(1 << c)
            colors[v] = -1
        return False

    try:
        ok = rec(len(uncolored), used)
    except BudgetExceeded:
        return UNKNOWN
    return Coloring(g, tuple(c + 1 for c in colors)) if ok else None


def chromatic_decision(g: Graph, m: int, node_limit: int | None = None):
    """True/False for chi(g) <= m, or UNKNOWN on budget."""
    res = k_colorable(g, m, node_limit)
    if res is UNKNOWN:
        return UNKNOWN
    return res is not None


def chromatic_number(
    g: Graph, limit: int = 200, node_limit: int | None = None
) -> tuple[int, Coloring]:
    """Exact chromatic number with a witness coloring."""
    if g.n > limit:
        raise ValueError(
            f"exact mode refused: {g.n} vertices exceeds the configured limit {limit}"
        )
    if g.n == 0:
        return 0, Coloring(g, ())
    if g.m == 0:
        return 1, Coloring(g, (1,) * g.n)
    if is_bipartite(g):
        return 2, _two_coloring(g)
    lb = max(3, len(greedy_clique(g)))
    witness = dsatur_greedy(g)
    ub = len(witness.palette)
    for k in range(lb, ub):
        res = k_colorable(g, k, node_limit)
        if res is UNKNOWN:
            raise BudgetExceeded(f"chromatic decision at k={k} exceeded node budget")
        if res is not None:
            return k, res
    return ub, witness


def _two_coloring(g: Graph) -> Coloring:
    side = [0] * g.n
    seen = [False] * g.n
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    side[u] = side[v] ^ 1
                    stack.append(u)
    return Coloring(g, tuple(s + 1 for s in side))


# ---------------------------------------------------------------------------
# local chromatic number


@dataclass(frozen=True)
class PsiResult:
    value: int
    classes: tuple[int, ...] | None  # vertex bit set per class
    exact: bool
    lower: int
    upper: int

    def coloring(self, g: Graph) -> Coloring:
        if self.classes is None:
            raise ValueError("inexact result carries no certificate")
        colors = [0] * g.n
        for i, mask in enumerate(self.classes):
            for v in bits(mask):
                colors[v] = i + 1
        return Coloring(g, tuple(colors))


def _search_order(g: Graph) -> list[int]:
    """BFS from a max-degree vertex; keeps partial neighborhoods saturated."""
    order: list[int] = []
    seen = [False] * g.n
    for s in sorted(range(g.n), key=g.degree, reverse=True):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            nbrs = sorted(g.neighbors(v), key=g.degree, reverse=True)
            for u in nbrs:
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
    return order


def psi_decision(
    g: Graph, m: int, node_limit: int | None = None
) -> tuple[int, ...] | None | _Unknown:
    """Search for a partition into independent classes in which every vertex
    is adjacent to at most m-1 distinct classes.  The objective depends only
    on the partition, so classes are numbered canonically (a new class is
    opened only as the next unused index) and the monotone partial profile
    prunes against the target."""
    if m < 1:
        return None
    if g.n == 0:
        return ()
    order = _search_order(g)
    budget = _Budget(node_limit)
    class_masks: list[int] = []
    cnt = [0] * g.n  # distinct classes currently adjacent to each vertex
    limit = m - 1
    adj = g.adj

    def place(v: int, c: int) -> list[int] | None:
        """Add v to class c, updating neighbor counts; None means overflow."""
        touched = []
        cm = class_masks[c]
        for u in bits(adj[v]):
            if not (adj[u] & cm):
                cnt[u] += 1
                touched.append(u)
                if cnt[u] > limit:
                    for w in touched:
                        cnt[w] -= 1
                    return None
        class_masks[c] |= 1 << v
        return touched

    def unplace(v: int, c: int, touched: list[int]) -> None:
        class_masks[c] &= ~(1 << v)
        for u in touched:
            cnt[u] -= 1

    def rec(idx: int) -> bool:
        budget.tick()
        if idx == g.n:
            return True
        v = order[idx]
        av = adj[v]
        ncls = len(class_masks)
        for c in range(ncls):
            if av & class_masks[c]:
                continue
            touched = place(v, c)
            if touched is not None:
                if rec(idx + 1):
                    return True
                unplace(v, c, touched)
        class_masks.append(0)
        touched = place(v, ncls)
        if touched is not None:
            if rec(idx + 1):
                return True
            unplace(v, ncls, touched)
        class_masks.pop()
        return False

    try:
        ok = rec(0)
    except BudgetExceeded:
        return UNKNOWN
    return tuple(class_masks) if ok else None


def local_chromatic(g: Graph, node_limit: int | None = 20_000_000) -> PsiResult:
    """Exact local chromatic number (min over proper colorings of the max
    closed-neighborhood color count) by increasing-target decision search."""
    if g.n == 0 or g.m == 0:
        classes = tuple((1 << v) for v in range(g.n))
        return PsiResult(1 if g.n else 0, classes, True, 0, 1)
    if is_bipartite(g):
        two = _two_coloring(g)
        cls = [0, 0]
        for v, c in enumerate(two.colors):
            cls[c - 1] |= 1 << v
        return PsiResult(2, tuple(cls), True, 2, 2)
    lb = max(3, len(greedy_clique(g)))
    ub_col = dsatur_greedy(g)
    ub = local_profile(g, ub_col).max_plus_one
    for m in range(lb, ub):
        res = psi_decision(g, m, node_limit)
        if res is UNKNOWN:
            return PsiResult(ub, None, False, m, ub)
        if res is not None:
            return PsiResult(m, res, True, m, m)
    cls_map: dict[int, int] = {}
    for v, c in enumerate(ub_col.colors):
        cls_map[c] = cls_map.get(c, 0) | (1 << v)
    return PsiResult(ub, tuple(cls_map.values()), True, ub, ub)


def proper_partitions(g: Graph) -> Iterator[tuple[int, ...]]:
    """All partitions of V into independent classes, canonically numbered
    (each class is opened by its least vertex)."""
    classes: list[int] = []

    def rec(v: int) -> Iterator[tuple[int, ...]]:
        if v == g.n:
            yield tuple(classes)
            return
        av = g.adj[v]
        for i in range(len(classes)):
            if not (classes[i] & av):
                classes[i] |= 1 << v
                yield from rec(v + 1)
                classes[i] &= ~(1 << v)
        classes.append(1 << v)
        yield from rec(v + 1)
        classes.pop()

    yield from rec(0)


def _partition_profile(g: Graph, classes: Sequence[int]) -> int:
    worst = 0
    for v in range(g.n):
        av = g.adj[v]
        seen = sum(1 for cm in classes if cm & av)
        if seen > worst:
            worst = seen
    return worst + 1


def local_chromatic_exhaustive(g: Graph, limit: int = 12) -> tuple[int, tuple[int, ...]]:
    """Independent oracle: minimum profile over all independent-set
    partitions, by plain enumeration.  Guarded to small graphs."""
    if g.n > limit:
        raise ValueError(f"exhaustive oracle refused: {g.n} > {limit} vertices")
    if g.n == 0:
        return 0, ()
    best = g.n + 1
    best_classes: tuple[int, ...] = ()
    for classes in proper_partitions(g):
        p = _partition_profile(g, classes)
        if p < best:
            best, best_classes = p, classes
    return best, best_classes


# ---------------------------------------------------------------------------
# fractional chromatic number


def maximal_independent_sets(g: Graph) -> list[int]:
    """All maximal independent sets as vertex bit sets (Bron-Kerbosch with
    pivoting on the complement graph)."""
    n = g.n
    full = (1 << n) - 1
    cadj = [(full ^ g.adj[v]) & ~(1 << v) for v in range(n)]
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pux = p | x
        pivot = max(bits(pux), key=lambda u: (p & cadj[u]).bit_count())
        for v in bits(p & ~cadj[pivot]):
            bv = 1 << v
            bk(r | bv, p & cadj[v], x & cadj[v])
            p &= ~bv
            x |= bv

    if n:
        bk(0, full, 0)
    return out


def fractional_chromatic(
    g: Graph, limit: int = 30
) -> tuple[Fraction, dict[int, Fraction]]:
    """Exact optimum of the fractional covering LP over maximal independent
    sets, with the optimal weights as certificate (keyed by vertex bit set)."""
    if g.n > limit:
        raise ValueError(f"exact mode refused: {g.n} > {limit} vertices")
    if g.n == 0:
        return Fraction(0), {}
    sets = maximal_independent_sets(g)
    a_rows = [[1 if (mask >> v) & 1 else 0 for mask in sets] for v in range(g.n)]
    value, x = simplex_min(a_rows, [1] * g.n, [1] * len(sets))
    weights = {mask: w for mask, w in zip(sets, x) if w != 0}
    for v in range(g.n):
        assert sum(w for mask, w in weights.items() if (mask >> v) & 1) >= 1
    return value, weights


# ---------------------------------------------------------------------------
# homomorphism search


def find_hom(
    g: Graph,
    h: Graph,
    node_limit: int | None = None,
    pin: dict[int, int] | None = None,
) -> dict[int, int] | None | _Unknown:
    """Edge-preserving map V(g) -> V(h) by backtracking with forward
    checking and minimum-remaining-values selection; exhaustive within the
    node budget (None is a verified negative, UNKNOWN a budget timeout).

    ``pin`` pre-assigns images; use it for symmetry breaking on
    vertex-transitive targets.
    """
    if g.n == 0:
        return {}
    if h.n == 0:
        return None
    full = (1 << h.n) - 1
    domains = [full] * g.n
    if pin:
        for v, a in pin.items():
            domains[v] = 1 << a
    assignment = [-1] * g.n
    budget = _Budget(node_limit)
    hadj = h.adj

    def rec(depth: int) -> bool:
        budget.tick()
        if depth == g.n:
            return True
        v = -1
        best = None
        for u in range(g.n):
            if assignment[u] < 0:
                size = domains[u].bit_count()
                if size == 0:
                    return False
                key = (size, -g.degree(u))
                if best is None or key < best:
                    best, v = key, u
        for a in bits(domains[v]):
            assignment[v] = a
            saved = []
            ok = True
            for u in bits(g.adj[v]):
                if assignment[u] < 0:
                    old = domains[u]
                    new = old & hadj[a]
                    if new != old:
                        saved.append((u, old))
                        domains[u] = new
                        if not new:
                            ok = False
                            break
                elif not (hadj[a] >> assignment[u]) & 1:
                    ok = False
                    break
            if ok and rec(depth + 1):
                return True
            for u, old in saved:
                domains[u] = old
            assignment[v] = -1
        return False

    try:
        ok = rec(0)
    except BudgetExceeded:
        return UNKNOWN
    if not ok:
        return None
    mapping = {v: assignment[v] for v in range(g.n)}
    for u, v in g.edges():
        assert h.has_edge(mapping[u], mapping[v])
    return mapping


# ---------------------------------------------------------------------------
# circular chromatic number


@dataclass(frozen=True)
class CircularResult:
    value: Fraction
    p: int
    q: int
    coloring: Coloring  # colors in 1..p satisfying q <= |c(u)-c(v)| <= p-q
    exact: bool
    lower: Fraction  # verified strict lower bound (chi-1, or last refuted value)


def _circular_candidates(chi: int, nmax: int) -> list[tuple[int, int]]:
    cands = set()
    for q in range(1, nmax + 1):
        p_lo = (chi - 1) * q + 1
        p_hi = min(chi * q, nmax)
        for p in range(p_lo, p_hi + 1):
            if p >= 2 * q and gcd(p, q) == 1:
                cands.add((p, q))
    return sorted(cands, key=lambda pq: Fraction(pq[0], pq[1]))


def verify_pq_coloring(g: Graph, c: Coloring, p: int, q: int) -> bool:
    for u, v in g.edges():
        d = abs(c.colors[u] - c.colors[v])
        if not q <= d <= p - q:
            return False
    return True


def circular_chromatic(g: Graph, node_limit: int | None = None) -> CircularResult:
    """Minimal p/q with a homomorphism into the circular complete graph
    K_{p/q}, searched over reduced fractions in (chi-1, chi] ascending with
    p bounded by |V| (the infimum is attained there); the witness coloring
    is re-verified edge by edge."""
    from .families import circular_complete

    if g.m == 0:
        value = Fraction(1 if g.n else 0)
        return CircularResult(value, 1, 1, Coloring(g, (1,) * g.n), True, Fraction(0))
    chi, chi_col = chromatic_number(g)
    anchor = max(range(g.n), key=g.degree)
    lower = Fraction(chi - 1)
    for p, q in _circular_candidates(chi, g.n):
        target = circular_complete(p, q)
        res = find_hom(g, target, node_limit=node_limit, pin={anchor: 0})
        if res is UNKNOWN:
            fallback = Coloring(g, chi_col.colors)
            return CircularResult(Fraction(chi), chi, 1, fallback, False, lower)
        if res is not None:
            colors = tuple(res[v] + 1 for v in range(g.n))
            col = Coloring(g, colors)
            assert verify_pq_coloring(g, col, p, q), "witness failed re-verification"
            return CircularResult(Fraction(p, q), p, q, col, True, lower)
        lower = Fraction(p, q)
    raise AssertionError("chi-coloring candidate (chi,1) cannot be refuted")


# ---------------------------------------------------------------------------
# zig-zag witnesses


@dataclass(frozen=True)
class ZigzagWitness:
    """Totally multicolored complete bipartite subgraph whose sorted colors
    alternate sides: colors[0] < colors[1] < ... with odd-position colors
    (1st, 3rd, ...) on side_odd and even-position colors on side_even."""

    side_odd: tuple[int, ...]
    side_even: tuple[int, ...]
    colors: tuple[int, ...]

    def check(self, g: Graph, c: Coloring) -> bool:
        t = len(self.colors)
        if list(self.colors) != sorted(self.colors):
            return False
        verts = []
        for j in range(t):
            side = self.side_odd if j % 2 == 0 else self.side_even
            v = side[j // 2]
            if c.colors[v] != self.colors[j]:
                return False
            verts.append(v)
        for a in self.side_odd:
            for b in self.side_even:
                if not g.has_edge(a, b):
                    return False
        return len(self.side_odd) == (t + 1) // 2 and len(self.side_even) == t // 2


def _alternating_search(
    g: Graph, class_masks: list[tuple[int, int]], t: int
) -> tuple[list[int], list[int]] | None:
    """Pick one vertex from t color classes in increasing color order so that
    odd positions and even positions form a complete bipartite pair.
    ``class_masks`` is sorted by color."""
    full = (1 << g.n) - 1
    ncls = len(class_masks)
    odd: list[int] = []
    even: list[int] = []

    def rec(j: int, start: int, need_odd: int, need_even: int) -> bool:
        if j == t:
            return True
        for ci in range(start, ncls - (t - j) + 1):
            mask = class_masks[ci][1]
            on_odd = j % 2 == 0
            cand = mask & (need_odd if on_odd else need_even)
            for v in bits(cand):
                if on_odd:
                    odd.append(v)
                    if rec(j + 1, ci + 1, need_odd, need_even & g.adj[v]):
                        return True
                    odd.pop()
                else:
                    even.append(v)
                    if rec(j + 1, ci + 1, need_odd & g.adj[v], need_even):
                        return True
                    even.pop()
        return False

    if rec(0, 0, full, full):
        return odd, even
    return None


def zigzag_find(g: Graph, c: Coloring, t: int) -> ZigzagWitness | None:
    """Exhaustive search for a zig-zag witness on t colors; None is a
    verified negative."""
    from .core import first_monochromatic_edge

    if first_monochromatic_edge(g, c) is not None:
        raise ValueError("zig-zag check requires a proper coloring")
    class_masks = sorted(c.classes().items())
    if len(class_masks) < t:
        return None
    res = _alternating_search(g, class_masks, t)
    if res is None:
        return None
    odd, even = res
    colors = []
    for j in range(t):
        v = odd[j // 2] if j % 2 == 0 else even[j // 2]
        colors.append(c.colors[v])
    w = ZigzagWitness(tuple(odd), tuple(even), tuple(colors))
    assert w.check(g, c)
    return w


def _split_realizable(g: Graph, classes: Sequence[int], small_side: frozenset[int]) -> bool:
    """Is there a totally multicolored complete bipartite subgraph whose
    small side uses exactly the classes in ``small_side`` (0-based indices)
    and whose large side uses the rest?"""
    full = (1 << g.n) - 1
    order = sorted(range(len(classes)), key=lambda i: (i not in small_side, i))

    def rec(j: int, need_small: int, need_large: int) -> bool:
        if j == len(order):
            return True
        ci = order[j]
        on_small = ci in small_side
        cand = classes[ci] & (need_small if on_small else need_large)
        for v in bits(cand):
            if on_small:
                if rec(j + 1, need_small, need_large & g.adj[v]):
                    return True
            else:
                if rec(j + 1, need_small & g.adj[v], need_large):
                    return True
        return False

    return rec(0, full, full)


@dataclass
class ZigzagReport:
    t: int
    partitions_checked: int
    witness_failures: list[tuple[int, ...]]
    t_class_partitions: int
    required_splits: int
    min_splits_found: int | None
    split_failures: list[tuple[int, ...]]

    @property
    def all_passed(self) -> bool:
        return not self.witness_failures and not self.split_failures


def zigzag_exhaustive(g: Graph, t: int, limit: int = 12) -> ZigzagReport:
    """Check the zig-zag property over every independent-set partition of g,
    and for partitions with exactly t classes count the distinct side-color
    splits realized by totally multicolored balanced bicliques."""
    if g.n > limit:
        raise ValueError(f"exhaustive zig-zag refused: {g.n} > {limit} vertices")
    required = comb(t, t // 2) if t % 2 == 1 else comb(t, t // 2) // 2
    report = ZigzagReport(t, 0, [], 0, required, None, [])
    small = t // 2
    for classes in proper_partitions(g):
        report.partitions_checked += 1
        coloring = _classes_to_coloring(g, classes)
        if zigzag_find(g, coloring, t) is None:
            report.witness_failures.append(classes)
            continue
        if len(classes) == t:
            report.t_class_partitions += 1
            found = 0
            seen_splits = set()
            for combo in combinations(range(t), small):
                key = frozenset(combo)
                if t % 2 == 0:
                    # unordered split: canonicalize by requiring class 0 in
                    # the complement side
                    if 0 in key:
                        continue
                if key in seen_splits:
                    continue
                seen_splits.add(key)
                if _split_realizable(g, classes, key):
                    found += 1
            if report.min_splits_found is None or found < report.min_splits_found:
                report.min_splits_found = found
            if found < required:
                report.split_failures.append(classes)
    return report


def _classes_to_coloring(g: Graph, classes: Sequence[int]) -> Coloring:
    colors = [0] * g.n
    for i, mask in enumerate(classes):
        for v in bits(mask):
            colors[v] = i + 1
    return Coloring(g, tuple(colors))
