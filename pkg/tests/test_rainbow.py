"""Tests for rainbow triangle detection, counting and digon listing."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_mantel.graph_core import GraphTriple, SimpleGraph, balanced_bipartite, blow_up, pairs
from rainbow_mantel.models import Digon, RainbowWitness
from rainbow_mantel.rainbow import (
    RAINBOW_TABLE,
    count_rainbow_triangles,
    count_rainbow_triangles_naive,
    find_rainbow_triangle,
    is_rainbow_free,
    is_rainbow_masks,
    list_digons,
    min_edge_count,
    triple_pairs,
)


@st.composite
def graph_triples(draw, max_n=7):
    n = draw(st.integers(min_value=0, max_value=max_n))
    m = n * (n - 1) // 2
    masks = draw(st.lists(st.integers(min_value=0, max_value=7), min_size=m, max_size=m))
    return GraphTriple.from_pair_masks(n, masks)


class TestRainbowTable:
    """The SDR lookup over the three pair masks of a triangle."""

    def test_single_colours(self):
        assert is_rainbow_masks(1, 2, 4)
        assert is_rainbow_masks(4, 1, 2)
        assert not is_rainbow_masks(1, 1, 4)
        assert not is_rainbow_masks(0, 7, 7)

    def test_all_colours_everywhere(self):
        assert is_rainbow_masks(7, 7, 7)

    def test_table_is_symmetric_in_the_pairs(self):
        for a, b, c in itertools.product(range(8), repeat=3):
            expected = RAINBOW_TABLE[a | b << 3 | c << 6]
            for x, y, z in itertools.permutations((a, b, c)):
                assert RAINBOW_TABLE[x | y << 3 | z << 6] == expected

    def test_true_entries_need_three_colours(self):
        for a, b, c in itertools.product(range(8), repeat=3):
            if is_rainbow_masks(a, b, c):
                assert a | b | c == 7
                assert a and b and c


class TestRainbowCounting:
    """Ordered rainbow counts and witnesses."""

    def test_single_rainbow_triangle(self):
        # 01 in G1, 12 in G2, 02 in G3
        t = GraphTriple.from_pair_masks(3, [1, 4, 2])
        assert count_rainbow_triangles(t) == 1
        assert find_rainbow_triangle(t) == RainbowWitness(0, 1, 2)

    def test_all_colours_triangle_counts_six(self):
        t = GraphTriple.from_pair_masks(3, [7, 7, 7])
        assert count_rainbow_triangles(t) == 6

    def test_blow_up_multiplies_count_by_k_cubed(self):
        t = GraphTriple.from_pair_masks(3, [7, 7, 7])
        assert count_rainbow_triangles(blow_up(t, 2)) == 48

    def test_identical_bipartite_is_rainbow_free(self):
        t = GraphTriple.identical(balanced_bipartite(9))
        assert is_rainbow_free(t)
        assert find_rainbow_triangle(t) is None
        assert min_edge_count(t) == 20

    def test_identical_complete_graph_count(self):
        n = 5
        t = GraphTriple.identical(SimpleGraph.complete(n))
        assert count_rainbow_triangles(t) == n * (n - 1) * (n - 2)

    @given(graph_triples())
    def test_fast_count_matches_naive(self, t):
        assert count_rainbow_triangles(t) == count_rainbow_triangles_naive(t)

    @given(graph_triples())
    def test_count_invariant_under_rotation(self, t):
        assert count_rainbow_triangles(t.rotate()) == count_rainbow_triangles(t)

    @given(graph_triples(max_n=5), st.integers(min_value=1, max_value=3))
    @settings(max_examples=30)
    def test_blow_up_scales_count(self, t, k):
        assert count_rainbow_triangles(blow_up(t, k)) == k**3 * count_rainbow_triangles(t)

    @given(graph_triples())
    def test_witness_exists_iff_count_positive(self, t):
        witness = find_rainbow_triangle(t)
        assert (witness is None) == (count_rainbow_triangles(t) == 0)
        if witness is not None:
            v1, v2, v3 = witness.as_tuple()
            assert t.g1.has_edge(v1, v2)
            assert t.g2.has_edge(v2, v3)
            assert t.g3.has_edge(v3, v1)

    @given(graph_triples())
    def test_rainbow_free_iff_every_triangle_fails_table(self, t):
        masks = dict(zip(pairs(t.n), t.pair_masks()))
        any_rainbow = any(
            is_rainbow_masks(masks[x, y], masks[y, z], masks[x, z])
            for x, y, z in itertools.combinations(range(t.n), 3)
        )
        assert any_rainbow == (not is_rainbow_free(t))


class TestDigons:
    """Pairs in exactly two colours, and pairs in all three."""

    def test_list_digons(self):
        t = GraphTriple.from_pair_masks(4, [3, 7, 5, 1, 6, 0])
        assert list_digons(t) == [
            Digon(0, 1, (1, 2)),
            Digon(0, 3, (1, 3)),
            Digon(1, 3, (2, 3)),
        ]
        assert triple_pairs(t) == [(0, 2)]

    @given(graph_triples())
    def test_digons_match_pair_masks(self, t):
        expected = [
            (u, v) for (u, v), mask in zip(pairs(t.n), t.pair_masks()) if bin(mask).count("1") == 2
        ]
        assert [(d.x, d.y) for d in list_digons(t)] == expected


@pytest.mark.smoke
def test_rainbow_table_has_512_entries():
    assert len(RAINBOW_TABLE) == 512
