import math

import numpy as np
import pytest

from topochrom.core import Coloring, is_proper
from topochrom.families import borsuk_sample
from topochrom.geometry import (
    facet_cell_diameter,
    adversarial_points,
    alpha_threshold,
    borsuk_standard_coloring,
    borsuk_wide_check,
    circle_distance,
    cover_plus,
    hemisphere_stable_check,
    moment_curve_points,
    regular_simplex,
    circle_map,
    circle_map_pq_coloring,
    sample_sphere,
    simplex_cover,
    verify_cover,
)

SAMPLES = 20_000  # module tests run lighter than the acceptance suite


class TestMomentCurve:
    def test_explicit_vectors(self):
        v = moment_curve_points(6, 2)
        assert np.allclose(v[0], -np.ones(3) / math.sqrt(3))
        assert np.allclose(v[1], np.array([1, 2, 4]) / math.sqrt(21))

    def test_unit_norms(self):
        for n, k in [(5, 2), (6, 2), (7, 3)]:
            v = moment_curve_points(n, k)
            assert np.allclose(np.linalg.norm(v, axis=1), 1.0, atol=1e-12)

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            moment_curve_points(4, 2)


class TestHemisphere:
    @pytest.mark.parametrize("n,k", [(5, 2), (6, 2), (7, 3)])
    def test_no_failures(self, n, k):
        rep = hemisphere_stable_check(n, k, samples=SAMPLES, seed=7)
        assert rep.ok and rep.min_margin > 0

    def test_rejects_zero_samples(self):
        with pytest.raises(ValueError):
            hemisphere_stable_check(6, 2, samples=0)


class TestSimplex:
    def test_gram(self):
        for k in (1, 2, 3, 4):
            w = regular_simplex(k)
            gram = w @ w.T
            off = gram - np.eye(k + 2)
            assert np.allclose(np.diag(gram), 1.0)
            assert np.allclose(off - np.diag(np.diag(off)), -1.0 / (k + 1) * (1 - np.eye(k + 2)))


class TestCovers:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_plain_cover(self, k):
        cov = simplex_cover(k)
        rep = verify_cover(cov, samples=SAMPLES, seed=3)
        mult_bound = (k + 2) // 2  # ceil((k+1)/2)
        assert rep.coverage == 1.0
        assert rep.max_multiplicity <= mult_bound
        assert rep.antipodal_conflicts == 0
        assert rep.max_either_or <= k + 1

    @pytest.mark.parametrize("k", [2, 3])
    def test_plus_cover(self, k):
        cov = cover_plus(k)
        rep = verify_cover(cov, samples=SAMPLES, seed=3)
        assert rep.sets == k + 3
        assert rep.coverage == 1.0
        assert rep.max_multiplicity <= (k + 4) // 2  # ceil((k+3)/2)
        assert rep.antipodal_conflicts == 0
        assert rep.max_either_or <= k + 2

    def test_multiplicity_bound_attained_at_adversarial_points(self):
        cov = simplex_cover(3)
        mem = cov.membership(adversarial_points(3))
        assert mem.sum(axis=1).max() == 2  # = ceil((3+1)/2)

    def test_vertices_removed_from_all_sets(self):
        cov = simplex_cover(2)
        mem = cov.membership(cov.vertices)
        assert not mem.any()


class TestBorsukColoring:
    def test_arc_thirds_on_circle(self):
        ang = np.arange(30) * 2 * math.pi / 30
        pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        colors = borsuk_standard_coloring(pts)
        counts = np.bincount(colors)[1:]
        assert sorted(counts.tolist()) == [10, 10, 10]

    def test_simplex_vertices_get_distinct_colors(self):
        for n in (2, 3, 4):
            w = regular_simplex(n - 1)
            colors = borsuk_standard_coloring(-w)  # antipodes sit inside facets
            assert len(set(colors.tolist())) == n + 1

    def test_threshold_value(self):
        assert abs(alpha_threshold(2) - 2 * math.cos(math.pi / 30)) < 1e-15
        assert 1.98 < alpha_threshold(2) < 1.99

    def test_wide_at_199(self):
        rng = np.random.default_rng(11)
        pts = sample_sphere(1, 800, rng)
        rep = borsuk_wide_check(2, 1.99, pts)
        assert rep.proper and rep.wide and rep.analytic_margin > 0

    def test_margin_zero_at_threshold(self):
        rng = np.random.default_rng(2)
        pts = sample_sphere(1, 200, rng)
        rep = borsuk_wide_check(2, alpha_threshold(2), pts)
        assert abs(rep.analytic_margin) < 1e-12
        rep4 = borsuk_wide_check(4, alpha_threshold(4), sample_sphere(3, 200, rng))
        assert abs(rep4.analytic_margin) < 1e-12

    def test_below_threshold_warns(self):
        rng = np.random.default_rng(2)
        pts = sample_sphere(1, 100, rng)
        with pytest.warns(UserWarning, match="threshold"):
            borsuk_wide_check(2, 1.9, pts)

    def test_properness_at_sqrt3_for_circle(self):
        # at n=2 the facet cells are 120-degree arcs of chord diameter
        # sqrt(3) = sqrt(2+2/n), so that threshold is exact
        rng = np.random.default_rng(4)
        alpha = math.sqrt(3) + 1e-9
        pts = sample_sphere(1, 800, rng)
        g = borsuk_sample(2, alpha, pts)
        colors = borsuk_standard_coloring(pts)
        assert is_proper(g, Coloring(g, tuple(int(x) for x in colors)))
        assert abs(facet_cell_diameter(2) - math.sqrt(3)) < 1e-15

    def test_properness_at_cell_diameter(self):
        rng = np.random.default_rng(4)
        for n in (3, 4):
            alpha = facet_cell_diameter(n) + 1e-9
            pts = sample_sphere(n - 1, 1500, rng)
            g = borsuk_sample(n, alpha, pts)
            colors = borsuk_standard_coloring(pts)
            assert is_proper(g, Coloring(g, tuple(int(x) for x in colors)))

    def test_cells_exceed_naive_threshold_beyond_circle(self):
        # two interior points of one facet cell of S^2 sit at distance
        # nearly facet_cell_diameter(3) > sqrt(2+2/3): an edge at the naive
        # threshold stays monochromatic
        w = regular_simplex(2)
        corner = w[0] - 1e-6 * w[3]
        corner /= np.linalg.norm(corner)
        mid = w[1] + w[2] - 1e-6 * w[3]
        mid /= np.linalg.norm(mid)
        pts = np.array([corner, mid])
        colors = borsuk_standard_coloring(pts)
        assert colors[0] == colors[1] == 4
        dist = float(np.linalg.norm(pts[0] - pts[1]))
        assert dist > math.sqrt(2 + 2 / 3)
        g = borsuk_sample(3, math.sqrt(2 + 2 / 3) + 1e-9, pts)
        assert g.m == 1
        assert not is_proper(g, Coloring(g, tuple(int(x) for x in colors)))


class TestRemark7:
    def test_n2_winding(self):
        rng = np.random.default_rng(5)
        pts = sample_sphere(1, 500, rng)
        g = circle_map(2, pts)
        gneg = circle_map(2, -pts)
        assert np.allclose(circle_distance(g, gneg), 0.5, atol=1e-9)

    def test_n4_circle_factor_antipodal_gap(self):
        rng = np.random.default_rng(6)
        ang = rng.uniform(0, 2 * math.pi, 300)
        pure = np.zeros((300, 4))
        pure[:, 2] = np.cos(ang)
        pure[:, 3] = np.sin(ang)
        d = circle_distance(circle_map(4, pure), circle_map(4, -pure))
        assert np.allclose(d, 0.25, atol=1e-9)

    def test_pq_73_on_circle(self):
        rng = np.random.default_rng(5)
        pts = sample_sphere(1, 500, rng)
        rep, col = circle_map_pq_coloring(2, 7, 3, pts, 1.999)
        assert rep.verified and rep.edges > 0
        assert rep.min_edge_distance >= 3 / 7

    def test_pq_92_on_s3(self):
        rng = np.random.default_rng(8)
        base = sample_sphere(3, 400, rng)
        jitter = rng.standard_normal((400, 4)) * 2e-3
        anti = -(base + jitter)
        anti /= np.linalg.norm(anti, axis=1, keepdims=True)
        pts = np.vstack([base, anti])
        rep, _ = circle_map_pq_coloring(4, 9, 2, pts, 1.9999)
        assert rep.verified and rep.edges >= 300
        assert rep.min_edge_distance >= 2 / 9

    def test_negative_control_small_alpha(self):
        rng = np.random.default_rng(9)
        pts = sample_sphere(1, 400, rng)
        rep, _ = circle_map_pq_coloring(2, 5, 2, pts, 1.8)
        assert not rep.verified and rep.violations > 0

    def test_rejects_pq_at_most_n(self):
        rng = np.random.default_rng(9)
        pts = sample_sphere(1, 10, rng)
        with pytest.raises(ValueError, match="p/q"):
            circle_map_pq_coloring(2, 2, 1, pts, 1.99)

    def test_rejects_odd_n(self):
        with pytest.raises(ValueError):
            circle_map(3, np.zeros((1, 3)))


def test_delta_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("TOPOCHROM_CACHE", str(tmp_path))
    a = simplex_cover(2).delta
    cached = list(tmp_path.glob("cover_delta_k2.json"))
    assert len(cached) == 1
    b = simplex_cover(2).delta
    assert a == b
