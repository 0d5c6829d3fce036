"""Numerical certification of the sphere-geometric constructions: the
moment-curve hemisphere witness, antipode-free sphere covers with small
multiplicity, the standard simplex coloring of Borsuk graphs and its
wideness, and the discontinuous circle map behind circular colorings of
even-dimensional Borsuk graphs.

Claims quantified over all points of a sphere are certified by seeded
Monte-Carlo sampling plus targeted adversarial points (simplex vertices,
projected face centroids, and their antipodes); every per-sample predicate
is exact up to the documented tie tolerance.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .core import Coloring, Graph, is_proper, is_s_wide
from .families import borsuk_sample, stable_subsets

__all__ = [
    "sample_sphere",
    "moment_curve_points",
    "hemisphere_stable_check",
    "regular_simplex",
    "SphereCover",
    "simplex_cover",
    "cover_plus",
    "adversarial_points",
    "verify_cover",
    "CoverReport",
    "borsuk_standard_coloring",
    "facet_cell_diameter",
    "borsuk_wide_check",
    "BorsukReport",
    "alpha_threshold",
    "circle_map",
    "circle_map_pq_coloring",
    "CircleMapReport",
    "circle_distance",
]

TIE_TOL = 1e-12


def sample_sphere(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on S^dim in R^{dim+1} by Gaussian normalization."""
    x = rng.standard_normal((count, dim + 1))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    # a standard normal vector is never numerically zero at these counts
    return x / norms


def moment_curve_points(n: int, k: int) -> np.ndarray:
    """The n signed moment-curve directions (-1)^i (1, i, ..., i^{n-2k}),
    normalized, as rows; row i-1 corresponds to ground element i."""
    if n <= 2 * k:
        raise ValueError("moment_curve_points needs n > 2k")
    d = n - 2 * k
    out = np.empty((n, d + 1))
    for i in range(1, n + 1):
        v = np.array([float(i) ** e for e in range(d + 1)])
        out[i - 1] = ((-1) ** i) * v
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    return out


@dataclass
class HemisphereReport:
    n: int
    k: int
    samples: int
    seed: int
    failures: int
    min_margin: float
    failing_directions: list[list[float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0


def hemisphere_stable_check(n: int, k: int, samples: int = 100_000, seed: int = 0) -> HemisphereReport:
    """Sample directions on S^{n-2k} and verify the open hemisphere around
    each contains a stable k-subset of the moment-curve arrangement.

    The margin of a direction is the best achievable minimum inner product
    over stable k-subsets; a failure (margin <= 0) falsifies the
    arrangement and is reported, never raised.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    v = moment_curve_points(n, k)
    rng = np.random.default_rng(seed)
    x = sample_sphere(n - 2 * k, samples, rng)
    ips = x @ v.T  # (samples, n)
    margins = np.full(samples, -np.inf)
    for subset in stable_subsets(n, k):
        cols = np.array(subset) - 1
        margins = np.maximum(margins, ips[:, cols].min(axis=1))
    bad = np.nonzero(margins <= 0)[0]
    return HemisphereReport(
        n,
        k,
        samples,
        seed,
        int(bad.size),
        float(margins.min()),
        [x[i].tolist() for i in bad[:10]],
    )


def regular_simplex(k: int) -> np.ndarray:
    """k+2 unit vertices of a regular simplex inscribed in S^k, as rows in
    R^{k+1}; pairwise inner products are -1/(k+1)."""
    m = k + 2
    centered = np.eye(m) - 1.0 / m
    span = np.vstack([np.eye(m - 1), -np.ones((1, m - 1))])
    q, _ = np.linalg.qr(span)
    w = centered @ q
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    return w


def _cover_gaps(w: np.ndarray, x: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inner products, the removal-region gap, and per-set membership of the
    central facet projections (closed sets: ties within TIE_TOL count)."""
    s = x @ w.T
    smin = s.min(axis=1)
    ssort = np.sort(s, axis=1)
    thr = (k + 3 + 1) // 2  # ceil((k+3)/2)
    gap = ssort[:, thr - 1] - smin
    if k % 2 == 0:
        gap_mult = ssort[:, k // 2] - smin  # ceil of multiplicity k/2+1
        gap_b1 = s[:, 0] - smin
        gap = np.minimum(gap, np.maximum(gap_mult, gap_b1))
    in_b = s <= (smin + TIE_TOL)[:, None]
    return s, gap, in_b


def _calibrate_delta(k: int, seed: int = 12345) -> float:
    """Largest safe removal width, estimated as one quarter of the sampled
    and locally refined infimum of max(gap(x), gap(-x)); below that value
    the removal region cannot meet its own antipode."""
    from scipy.optimize import minimize

    w = regular_simplex(k)
    rng = np.random.default_rng(seed)
    x = sample_sphere(k, 20_000, rng)
    _, gplus, _ = _cover_gaps(w, x, k)
    _, gminus, _ = _cover_gaps(w, -x, k)
    f = np.maximum(gplus, gminus)
    order = np.argsort(f)

    def objective(y: np.ndarray) -> float:
        nrm = np.linalg.norm(y)
        if nrm < 1e-9:
            return 10.0
        p = (y / nrm)[None, :]
        _, a, _ = _cover_gaps(w, p, k)
        _, b, _ = _cover_gaps(w, -p, k)
        return float(max(a[0], b[0]))

    best = float(f[order[0]])
    for idx in order[:8]:
        res = minimize(objective, x[idx], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        best = min(best, float(res.fun))
    return best / 4.0


def _delta_for(k: int) -> float:
    cache_dir = os.environ.get("TOPOCHROM_CACHE")
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, f"cover_delta_k{k}.json")
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                return float(json.load(fh)["delta"])
        delta = _calibrate_delta(k)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"k": k, "delta": delta}, fh)
        return delta
    return _calibrate_delta(k)


@dataclass(frozen=True)
class SphereCover:
    """Deterministic membership oracles for a family of closed antipode-free
    subsets of S^k.  ``plus`` adds the closed removal region as one more set
    (the k+3 configuration, which covers the sphere outright)."""

    k: int
    delta: float
    plus: bool
    vertices: np.ndarray  # (k+2, k+1) simplex rows

    @property
    def set_count(self) -> int:
        return self.k + 3 if self.plus else self.k + 2

    @property
    def names(self) -> list[str]:
        base = [f"A{i + 1}" for i in range(self.k + 2)]
        return base + ["Dbar"] if self.plus else base

    def membership(self, x: np.ndarray) -> np.ndarray:
        """(len(x), set_count) boolean membership matrix."""
        _, gap, in_b = _cover_gaps(self.vertices, x, self.k)
        in_d = gap < self.delta
        a = in_b & ~in_d[:, None]
        if self.plus:
            return np.hstack([a, (gap <= self.delta)[:, None]])
        return a


def simplex_cover(k: int, delta: float | None = None) -> SphereCover:
    """k+2 antipode-free closed sets on S^k: the facet projections of an
    inscribed regular simplex minus an open neighborhood of the
    high-multiplicity skeleton.  Together with their antipodes they cover
    the sphere; no point lies in more than ceil((k+1)/2) of them."""
    if k < 1:
        raise ValueError("simplex_cover needs k >= 1")
    return SphereCover(k, delta if delta is not None else _delta_for(k), False, regular_simplex(k))


def cover_plus(k: int, delta: float | None = None) -> SphereCover:
    """k+3 closed sets covering S^k outright: the k+2 trimmed facet
    projections plus the closure of the removed neighborhood; multiplicity
    is at most ceil((k+3)/2)."""
    if k < 1:
        raise ValueError("cover_plus needs k >= 1")
    return SphereCover(k, delta if delta is not None else _delta_for(k), True, regular_simplex(k))


def adversarial_points(k: int) -> np.ndarray:
    """Simplex vertices, all projected face centroids, and their antipodes:
    the tie configurations where the cover bounds are actually attained."""
    from itertools import combinations

    w = regular_simplex(k)
    pts = []
    for size in range(1, k + 2):
        for face in combinations(range(k + 2), size):
            centroid = w[list(face)].mean(axis=0)
            centroid /= np.linalg.norm(centroid)
            pts.append(centroid)
            pts.append(-centroid)
    return np.array(pts)


@dataclass
class CoverReport:
    k: int
    sets: int
    samples: int
    seed: int
    coverage: float  # fraction of samples in the required union
    max_multiplicity: int
    antipodal_conflicts: int  # samples with x and -x in one common set
    max_either_or: int  # max over samples of |{A : x in A or -x in A}|

    def ok(self, mult_bound: int, either_bound: int) -> bool:
        return (
            self.coverage == 1.0
            and self.max_multiplicity <= mult_bound
            and self.antipodal_conflicts == 0
            and self.max_either_or <= either_bound
        )


def verify_cover(
    cover: SphereCover,
    samples: int = 100_000,
    seed: int = 0,
    include_adversarial: bool = True,
) -> CoverReport:
    """Sampled verification of the four cover statistics: coverage of the
    required union, maximal multiplicity, per-set antipodal freeness, and
    the count of sets meeting a point or its antipode."""
    rng = np.random.default_rng(seed)
    x = sample_sphere(cover.k, samples, rng)
    if include_adversarial:
        x = np.vstack([x, adversarial_points(cover.k)])
    mem = cover.membership(x)
    mem_neg = cover.membership(-x)
    if cover.plus:
        covered = mem.any(axis=1)
    else:
        covered = (mem | mem_neg).any(axis=1)
    mult = mem.sum(axis=1)
    conflicts = (mem & mem_neg).any(axis=1)
    either = (mem | mem_neg).sum(axis=1)
    return CoverReport(
        cover.k,
        cover.set_count,
        int(len(x)),
        seed,
        float(np.mean(covered)),
        int(mult.max()),
        int(np.count_nonzero(conflicts)),
        int(either.max()),
    )


# ---------------------------------------------------------------------------
# Borsuk graphs


def borsuk_standard_coloring(points: np.ndarray) -> np.ndarray:
    """Color each point of S^{n-1} by the simplex facet its origin ray
    crosses (least facet index on ties): n+1 colors, 1-based.

    Same-colored points lie in one projected facet, whose chord diameter is
    facet_cell_diameter(n); the coloring is proper exactly on Borsuk graphs
    with alpha above that value."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[1]
    w = regular_simplex(n - 1)
    s = pts @ w.T
    return np.argmin(s, axis=1) + 1


def facet_cell_diameter(n: int) -> float:
    """Chord diameter of one facet cell of the standard coloring on S^{n-1}.

    The extremal pair projects the centroids of two complementary sub-faces
    of the facet, with a and n-a corners: the inner product of the
    projections is -sqrt(a(n-a)/((a+1)(n+1-a))), worst at a = n//2.
    Equals sqrt(2+2/n) at n=2 but exceeds it for n >= 3 and tends to 2, so
    the facet coloring of the n-dimensional Borsuk graph needs alpha above
    this value, not merely sqrt(2+2/n)."""
    a = n // 2
    worst = a * (n - a) / ((a + 1.0) * (n + 1.0 - a))
    return math.sqrt(2.0 + 2.0 * math.sqrt(worst))


def alpha_threshold(n: int) -> float:
    """Edge-length threshold above which the standard coloring of the
    n-dimensional Borsuk graph is wide: 2 cos(arccos(1/n)/10)."""
    return 2.0 * math.cos(math.acos(1.0 / n) / 10.0)


@dataclass
class BorsukReport:
    n: int
    alpha: float
    points: int
    edges: int
    analytic_margin: float  # arccos(1/n) - 5 * (2 arccos(alpha/2))
    proper: bool
    wide: bool
    colors_used: int

    @property
    def ok(self) -> bool:
        return self.proper and self.wide


def borsuk_wide_check(n: int, alpha: float, points: np.ndarray) -> BorsukReport:
    """Check that the standard simplex coloring of the sampled Borsuk graph
    is proper and wide, and report the analytic wideness margin
    arccos(1/n) - 5*phi (nonnegative exactly when alpha >= alpha_n)."""
    import warnings

    margin = math.acos(1.0 / n) - 5.0 * (2.0 * math.acos(alpha / 2.0))
    if alpha < alpha_threshold(n) - 1e-12:
        warnings.warn(
            f"alpha={alpha} is below the wideness threshold {alpha_threshold(n):.6f}; "
            "testing empirically anyway",
            stacklevel=2,
        )
    g = borsuk_sample(n, alpha, points)
    colors = borsuk_standard_coloring(points)
    c = Coloring(g, tuple(int(x) for x in colors))
    proper = is_proper(g, c)
    wide = proper and is_s_wide(g, c, 3)
    return BorsukReport(
        n, alpha, g.n, g.m, margin, proper, wide, len(set(colors.tolist()))
    )


# ---------------------------------------------------------------------------
# the circle map of the even-dimensional Borsuk graph


def circle_map(n: int, points: np.ndarray) -> np.ndarray:
    """Deterministic map S^{n-1} -> [0,1) (the circle of unit perimeter)
    whose edge images stay nearly 1/n apart for edge lengths close to 2; n
    must be even.

    For n = 2 this is the winding map angle/2pi.  For larger even n the
    sphere decomposes as the join of S^{n-3} and a circle: the spherical
    factor is colored by the standard coloring into n-1 equidistant circle
    points, the circle factor winds at rate 2/n, and join intervals move
    uniformly to the nearest point of the n/2-element equidistant set
    through the circle-factor image (ties broken clockwise, i.e. forward).
    """
    if n < 2 or n % 2:
        raise ValueError("circle_map needs even n >= 2")
    pts = np.asarray(points, dtype=float)
    if n == 2:
        ang = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * math.pi)
        return ang / (2 * math.pi)
    u = pts[:, : n - 2]
    v = pts[:, n - 2 :]
    nu = np.linalg.norm(u, axis=1)
    nv = np.linalg.norm(v, axis=1)
    t = (2.0 / math.pi) * np.arctan2(nv, nu)
    gb = np.mod(np.arctan2(v[:, 1], v[:, 0]), 2 * math.pi) / (2 * math.pi) * (2.0 / n)
    # spherical-factor image: standard coloring into n-1 equidistant points
    safe_u = np.where(nu[:, None] > 1e-15, u, np.eye(1, n - 2)[0])
    a = safe_u / np.linalg.norm(safe_u, axis=1, keepdims=True)
    ga = (borsuk_standard_coloring(a) - 1) / (n - 1.0)
    spacing = 2.0 / n
    offset = np.mod(gb - ga, spacing)
    delta = np.where(offset <= spacing / 2.0, offset, offset - spacing)
    g = np.mod(ga + t * delta, 1.0)
    g = np.where(nu <= 1e-15, np.mod(gb, 1.0), g)
    return g


def circle_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = np.mod(a - b, 1.0)
    return np.minimum(d, 1.0 - d)


@dataclass
class CircleMapReport:
    n: int
    p: int
    q: int
    alpha: float
    points: int
    edges: int
    verified: bool
    violations: int
    min_edge_distance: float  # min over edges of the circle distance of images
    margin: float  # min_edge_distance - q/p

    def coloring(self, g: Graph, colors: tuple[int, ...]) -> Coloring:
        return Coloring(g, colors)


def circle_map_pq_coloring(
    n: int, p: int, q: int, points: np.ndarray, alpha: float
) -> tuple[CircleMapReport, Coloring]:
    """Split the circle into p equal arcs and color each sampled point by the
    arc of its circle-map image; for p/q > n and alpha close enough to 2
    this is a (p,q)-coloring of the sampled Borsuk graph.  The edge
    constraint q <= |c(u)-c(v)| <= p-q is verified and failures reported."""
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise ValueError("p, q must be positive and coprime")
    if p <= n * q:
        raise ValueError(f"needs p/q > n, got {p}/{q} <= {n}")
    g = circle_map(n, points)
    colors = tuple(int(x) for x in np.minimum(np.floor(g * p), p - 1).astype(int) + 1)
    graph = borsuk_sample(n, alpha, points)
    coloring = Coloring(graph, colors)
    violations = 0
    min_dist = math.inf
    for u, v in graph.edges():
        d = abs(colors[u] - colors[v])
        if not q <= d <= p - q:
            violations += 1
        dist = float(circle_distance(np.array([g[u]]), np.array([g[v]]))[0])
        min_dist = min(min_dist, dist)
    if graph.m == 0:
        min_dist = math.nan
    report = CircleMapReport(
        n,
        p,
        q,
        alpha,
        graph.n,
        graph.m,
        violations == 0,
        violations,
        min_dist,
        (min_dist - q / p) if graph.m else math.nan,
    )
    return report, coloring
