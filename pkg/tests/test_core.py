import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_is_wide, brute_walk_pairs, random_graph
from topochrom.core import (
    Coloring,
    Graph,
    bits,
    first_monochromatic_edge,
    is_proper,
    is_s_wide,
    local_profile,
    walk_reachability,
    wide_via_neighborhoods,
)
from topochrom.families import complete, cycle


def k2():
    return complete(2)


class TestGraph:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            Graph(["a", "b"], [0b10, 0b00])

    def test_rejects_loop(self):
        with pytest.raises(ValueError, match="loop"):
            Graph(["a"], [0b1])

    def test_rejects_duplicate_labels(self):
        with pytest.raises(ValueError, match="distinct"):
            Graph(["a", "a"], [0, 0])

    def test_counts(self):
        g = cycle(5)
        assert g.n == 5 and g.m == 5
        assert sorted(g.neighbors(0)) == [1, 4]
        assert g.degree(2) == 2

    def test_without_edge(self):
        g = cycle(5)
        h = g.without_edge(0, 1)
        assert h.m == 4 and not h.has_edge(0, 1) and g.has_edge(0, 1)


class TestProper:
    def test_k2_two_colors(self):
        assert is_proper(k2(), Coloring(k2(), (1, 2)))

    def test_k2_monochromatic(self):
        assert not is_proper(k2(), Coloring(k2(), (1, 1)))

    def test_c5_direct_scan(self):
        g = cycle(5)
        c = Coloring(g, (1, 2, 1, 2, 3))
        # oracle: direct edge scan
        assert all(c.colors[u] != c.colors[v] for u, v in g.edges())
        assert is_proper(g, c)

    def test_mismatch_diagnostic(self):
        g = cycle(5)
        other = Coloring(complete(5), (1, 2, 3, 4, 5))
        with pytest.raises(ValueError, match="different graph"):
            is_proper(g, other)

    def test_first_violation(self):
        g = cycle(4)
        edge = first_monochromatic_edge(g, Coloring(g, (1, 1, 2, 2)))
        assert edge == (0, 1)


class TestLocalProfile:
    def test_c5_example(self):
        g = cycle(5)
        prof = local_profile(g, Coloring(g, (1, 2, 1, 2, 3)))
        # oracle: brute scan of all 5 neighborhoods
        brute = [len({(1, 2, 1, 2, 3)[u] for u in g.neighbors(v)}) for v in range(5)]
        assert prof.per_vertex == tuple(brute)
        assert prof.max_plus_one == 3

    def test_complete_all_distinct(self):
        for n in (2, 3, 5):
            g = complete(n)
            prof = local_profile(g, Coloring(g, tuple(range(1, n + 1))))
            assert prof.max_plus_one == n

    def test_rejects_improper(self):
        g = cycle(4)
        with pytest.raises(ValueError, match="not proper"):
            local_profile(g, Coloring(g, (1, 1, 1, 1)))

    def test_profile_at_most_palette(self, rng):
        from topochrom.solvers import dsatur_greedy

        for _ in range(25):
            g = random_graph(rng.randint(2, 9), 0.4, rng)
            c = dsatur_greedy(g)
            assert local_profile(g, c).max_plus_one <= len(c.palette)


class TestWalks:
    def test_k2_odd_even(self):
        g = k2()
        r3 = walk_reachability(g, 3)
        assert r3 == [0b10, 0b01]
        r2 = walk_reachability(g, 2)
        assert r2 == [0b01, 0b10]

    def test_c5_closed_5_walks(self):
        g = cycle(5)
        r5 = walk_reachability(g, 5)
        assert all((r5[v] >> v) & 1 for v in range(5))

    def test_matches_walk_enumeration(self, rng):
        for _ in range(12):
            g = random_graph(rng.randint(2, 6), 0.5, rng)
            for length in (1, 2, 3, 5):
                rel = walk_reachability(g, length)
                brute = brute_walk_pairs(g, length)
                got = {(u, w) for u in range(g.n) for w in bits(rel[u])}
                assert got == brute

    def test_two_step_identity_on_non_isolated(self, rng):
        for _ in range(10):
            g = random_graph(rng.randint(2, 8), 0.4, rng)
            r2 = walk_reachability(g, 2)
            for v in range(g.n):
                if g.degree(v):
                    assert (r2[v] >> v) & 1

    def test_rejects_zero_length(self):
        with pytest.raises(ValueError):
            walk_reachability(k2(), 0)


class TestSWide:
    def test_s1_is_properness(self, rng):
        for _ in range(20):
            g = random_graph(rng.randint(2, 8), 0.4, rng)
            colors = tuple(rng.randint(1, 3) for _ in range(g.n))
            c = Coloring(g, colors)
            assert is_s_wide(g, c, 1) == is_proper(g, c)

    def test_c15_interval_coloring_is_3_wide(self):
        from topochrom.constructions import sg_interval_coloring

        c = sg_interval_coloring(15, 7, (5, 5, 5))
        assert is_s_wide(c.graph, c, 3)
        assert brute_is_wide(c.graph, c, 3)

    def test_c5_never_3_wide(self):
        from topochrom.solvers import proper_partitions

        g = cycle(5)
        for classes in proper_partitions(g):
            colors = [0] * 5
            for i, mask in enumerate(classes):
                for v in bits(mask):
                    colors[v] = i + 1
            assert not is_s_wide(g, Coloring(g, tuple(colors)), 3)

    def test_cross_check_neighborhood_characterization(self, rng):
        from topochrom.solvers import dsatur_greedy

        cases = 0
        for _ in range(40):
            g = random_graph(rng.randint(2, 8), 0.25, rng)
            c = dsatur_greedy(g)
            assert is_s_wide(g, c, 3) == wide_via_neighborhoods(g, c)
            cases += 1
        assert cases == 40

    def test_monotone_in_s_without_isolated_vertices(self, rng):
        from topochrom.solvers import dsatur_greedy

        checked = 0
        for _ in range(60):
            g = random_graph(rng.randint(2, 8), 0.5, rng)
            if any(g.degree(v) == 0 for v in range(g.n)):
                continue
            c = dsatur_greedy(g)
            for s in (3, 2):
                if is_s_wide(g, c, s):
                    assert all(is_s_wide(g, c, sp) for sp in range(1, s))
            checked += 1
        assert checked > 10


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(2, 7),
    edges=st.sets(st.tuples(st.integers(0, 6), st.integers(0, 6)), max_size=15),
    s=st.integers(1, 3),
    data=st.data(),
)
def test_swide_monotone_property(n, edges, s, data):
    clean = [(u, v) for u, v in edges if u < v < n]
    g = Graph.from_edges([str(i) for i in range(n)], clean)
    if any(g.degree(v) == 0 for v in range(g.n)):
        return
    colors = tuple(
        data.draw(st.integers(1, 4), label=f"color{v}") for v in range(g.n)
    )
    c = Coloring(g, colors)
    if is_s_wide(g, c, s):
        for sp in range(1, s):
            assert is_s_wide(g, c, sp)
