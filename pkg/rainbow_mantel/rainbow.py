"""Rainbow triangle detection and counting on graph triples.

A rainbow triangle is an ordered triple (v1, v2, v3) with v1v2 in G1, v2v3 in
G2 and v3v1 in G3. Counts are of ordered triples, so the cyclic relabelling
(G1, G2, G3) -> (G2, G3, G1) and blow-up by k (count times k**3) are exact.
"""

import logging
from typing import Optional

from rainbow_mantel.graph_core import GraphTriple, members, pairs
from rainbow_mantel.models import Digon, RainbowWitness

logger = logging.getLogger(__name__)


def _has_distinct_representatives(m_xy: int, m_yz: int, m_xz: int) -> bool:
    """Whether the three pair masks admit one distinct colour each."""
    for c_xy in range(3):
        if not m_xy >> c_xy & 1:
            continue
        for c_yz in range(3):
            if c_yz == c_xy or not m_yz >> c_yz & 1:
                continue
            if m_xz >> (3 - c_xy - c_yz) & 1:
                return True
    return False


def _build_rainbow_table() -> tuple[bool, ...]:
    """Rainbow flag of every mask triple, in RAINBOW_TABLE index order."""
    return tuple(
        _has_distinct_representatives(key & 7, key >> 3 & 7, key >> 6 & 7)
        for key in range(512)
    )


# Indexed by m_xy | m_yz << 3 | m_xz << 6 over the colour masks of the three
# pairs of an unordered triangle. The triangle carries a rainbow orientation
# iff the masks admit distinct representatives, which is symmetric in the pairs.
RAINBOW_TABLE = _build_rainbow_table()


def is_rainbow_masks(m_xy: int, m_yz: int, m_xz: int) -> bool:
    """Whether a triangle with these pair masks is rainbow."""
    return RAINBOW_TABLE[m_xy | m_yz << 3 | m_xz << 6]


def find_rainbow_triangle(t: GraphTriple) -> Optional[RainbowWitness]:
    """Lexicographically first rainbow witness, or None if the triple is rainbow-free."""
    r1, r2, r3 = (g.rows for g in t.graphs)
    for v1 in range(t.n):
        for v2 in members(r1[v1]):
            common = r2[v2] & r3[v1]
            if common:
                v3 = (common & -common).bit_length() - 1
                return RainbowWitness(v1, v2, v3)
    return None


def count_rainbow_triangles(t: GraphTriple) -> int:
    """Number of ordered rainbow triples, by row intersection and popcount."""
    r1, r2, r3 = (g.rows for g in t.graphs)
    total = 0
    for v1 in range(t.n):
        row3 = r3[v1]
        if not row3:
            continue
        for v2 in members(r1[v1]):
            total += (r2[v2] & row3).bit_count()
    return total


def count_rainbow_triangles_naive(t: GraphTriple) -> int:
    """Cubic triple loop over adjacency predicates; the oracle for the fast count."""
    g1, g2, g3 = t.graphs
    n = t.n
    return sum(
        1
        for v1 in range(n)
        for v2 in range(n)
        for v3 in range(n)
        if g1.has_edge(v1, v2) and g2.has_edge(v2, v3) and g3.has_edge(v3, v1)
    )


def is_rainbow_free(t: GraphTriple) -> bool:
    """Whether ``t`` has no rainbow triangle."""
    return find_rainbow_triangle(t) is None


def min_edge_count(t: GraphTriple) -> int:
    """Smallest of the three edge counts."""
    return min(t.edge_counts())


def list_digons(t: GraphTriple) -> list[Digon]:
    """Pairs lying in exactly two of the three edge sets, in lexicographic order."""
    digons = []
    r1, r2, r3 = (g.rows for g in t.graphs)
    for u in range(t.n):
        # in at least two colours
        twice = (r1[u] & r2[u]) | (r1[u] & r3[u]) | (r2[u] & r3[u])
        exactly_two = twice & ~(r1[u] & r2[u] & r3[u])
        for v in members(exactly_two >> (u + 1)):
            v += u + 1
            mask = t.pair_mask(u, v)
            colors = tuple(c + 1 for c in range(3) if mask >> c & 1)
            digons.append(Digon(u, v, (colors[0], colors[1])))
    return digons


def triple_pairs(t: GraphTriple) -> list[tuple[int, int]]:
    """Pairs that are edges in all three colours."""
    r1, r2, r3 = (g.rows for g in t.graphs)
    return [(u, v) for u, v in pairs(t.n) if (r1[u] & r2[u] & r3[u]) >> v & 1]
