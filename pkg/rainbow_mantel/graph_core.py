"""Graph-triple data model with bit-row adjacency.

Each vertex owns one Python ``int`` whose set bits are its neighbours, so
subset and triangle counts reduce to word-parallel AND plus ``int.bit_count``.
Graphs are immutable once built; :class:`GraphBuilder` is the only mutable
stage and is meant to have a single owner.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from rainbow_mantel.config import Config
from rainbow_mantel.models import LoopError, ValidationError, VertexRangeError

logger = logging.getLogger(__name__)

# A vertex subset is a bit vector over 0..n-1.
VertexSet = int
Edge = tuple[int, int]


def vertex_set(vertices: Iterable[int]) -> VertexSet:
    """Pack vertex indices into a bit vector."""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask: VertexSet) -> list[int]:
    """Vertices of a bit vector in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def pairs(n: int) -> list[Edge]:
    """All unordered pairs u < v in lexicographic order."""
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def _check_vertex_budget(n: int) -> None:
    """Raise ValidationError when n exceeds Config.MAX_VERTICES."""
    if n < 0 or n > Config.MAX_VERTICES:
        raise ValidationError(
            f"n={n} outside the vertex budget 0..{Config.MAX_VERTICES}"
        )


def _check_vertex(v: int, n: int) -> None:
    """Raise VertexRangeError unless 0 <= v < n."""
    if not 0 <= v < n:
        raise VertexRangeError(v, n)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected loopless graph on 0..n-1 stored as adjacency bit rows."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_vertex_budget(self.n)
        if len(self.rows) != self.n:
            raise ValidationError(f"expected {self.n} rows, got {len(self.rows)}")

    @classmethod
    def empty(cls, n: int) -> SimpleGraph:
        """Edgeless graph on n vertices."""
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> SimpleGraph:
        """K_n on n vertices."""
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> SimpleGraph:
        """Graph on n vertices with the given undirected edges; duplicates are ignored."""
        builder = GraphBuilder(n)
        for u, v in edges:
            builder.add_edge(u, v)
        return builder.build()

    @classmethod
    def from_matrix(cls, adjacency: np.ndarray) -> SimpleGraph:
        """Build from a symmetric 0/1 matrix with zero diagonal."""
        matrix = np.asarray(adjacency, dtype=bool)
        n = matrix.shape[0]
        if matrix.shape != (n, n):
            raise ValidationError("adjacency matrix must be square")
        if matrix.diagonal().any():
            raise LoopError(int(np.flatnonzero(matrix.diagonal())[0]))
        if not np.array_equal(matrix, matrix.T):
            raise ValidationError("adjacency matrix must be symmetric")
        packed = np.packbits(matrix, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        return cls(n, rows)

    def to_matrix(self) -> np.ndarray:
        """Boolean adjacency matrix."""
        matrix = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges():
            matrix[u, v] = matrix[v, u] = True
        return matrix

    @property
    def universe(self) -> VertexSet:
        """Bit set of all n vertices."""
        return (1 << self.n) - 1

    @cached_property
    def edge_count(self) -> int:
        """Number of undirected edges."""
        return sum(row.bit_count() for row in self.rows) // 2

    def has_edge(self, u: int, v: int) -> bool:
        """Whether u and v are adjacent."""
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        """Bit set of the neighbours of v."""
        return self.rows[v]

    def degree(self, v: int) -> int:
        """Number of neighbours of v."""
        return self.rows[v].bit_count()

    def edges(self) -> Iterator[Edge]:
        """Edges (u, v) with u < v in lexicographic order."""
        for u, row in enumerate(self.rows):
            for v in members(row >> (u + 1)):
                yield u, u + 1 + v

    def is_symmetric(self) -> bool:
        """Whether u in N(v) exactly when v in N(u)."""
        return all(
            self.has_edge(v, u) for u in range(self.n) for v in members(self.rows[u])
        )

    def has_loops(self) -> bool:
        """Whether some vertex is its own neighbour."""
        return any(row >> v & 1 for v, row in enumerate(self.rows))


class GraphBuilder:
    """Mutable construction stage for a :class:`SimpleGraph`."""

    def __init__(self, n: int):
        _check_vertex_budget(n)
        self.n = n
        self._rows = [0] * n

    @classmethod
    def from_graph(cls, graph: SimpleGraph) -> GraphBuilder:
        """Builder preloaded with the rows of ``graph``."""
        builder = cls(graph.n)
        builder._rows = list(graph.rows)
        return builder

    def add_edge(self, u: int, v: int) -> GraphBuilder:
        if u == v:
            raise LoopError(u)
        _check_vertex(u, self.n)
        _check_vertex(v, self.n)
        self._rows[u] |= 1 << v
        self._rows[v] |= 1 << u
        return self

    def add_clique(self, vertices: VertexSet) -> GraphBuilder:
        """Join every pair of ``vertices``."""
        for v in members(vertices):
            self._rows[v] |= vertices & ~(1 << v)
        return self

    def build(self) -> SimpleGraph:
        """Freeze the rows into a SimpleGraph."""
        return SimpleGraph(self.n, tuple(self._rows))


def add_edge(g: SimpleGraph, u: int, v: int) -> SimpleGraph:
    """Return a copy of ``g`` with edge {u, v}; adding an existing edge is a no-op."""
    return GraphBuilder.from_graph(g).add_edge(u, v).build()


def _check_subset(g: SimpleGraph, x: VertexSet) -> None:
    """Raise ValidationError if ``x`` has a vertex outside ``g``."""
    if x < 0 or x >> g.n:
        raise ValidationError(f"vertex set {x:#x} is not a subset of 0..{g.n - 1}")


def e_within(g: SimpleGraph, x: VertexSet) -> int:
    """Number of edges with both endpoints in ``x``."""
    _check_subset(g, x)
    return sum((g.rows[v] & x).bit_count() for v in members(x)) // 2


def e_between(g: SimpleGraph, x: VertexSet, y: VertexSet) -> int:
    """Number of edges with one endpoint in ``x`` and the other in ``y``."""
    _check_subset(g, x)
    _check_subset(g, y)
    if x & y:
        raise ValidationError("e_between requires disjoint vertex sets")
    return sum((g.rows[v] & y).bit_count() for v in members(x))


def greedy_maximal_matching(g: SimpleGraph) -> list[Edge]:
    """Maximal matching taking edges greedily in lexicographic order."""
    matched = 0
    matching = []
    for u in range(g.n):
        if matched >> u & 1:
            continue
        free = g.rows[u] & ~matched & ~((1 << (u + 1)) - 1)
        if free:
            v = (free & -free).bit_length() - 1
            matching.append((u, v))
            matched |= (1 << u) | (1 << v)
    return matching


def common_neighbor_pairs(g: SimpleGraph) -> int:
    """Number of unordered pairs {x, y} with N(x) and N(y) intersecting."""
    rows = g.rows
    return sum(
        1 for x in range(g.n) for y in range(x + 1, g.n) if rows[x] & rows[y]
    )


def is_triangle_free(g: SimpleGraph) -> bool:
    """Whether no three vertices are pairwise adjacent."""
    rows = g.rows
    for u, v in g.edges():
        if rows[u] & rows[v]:
            return False
    return True


def complete_bipartite(left: int, right: int) -> SimpleGraph:
    """K_{left,right} with parts 0..left-1 and left..left+right-1."""
    n = left + right
    left_mask = (1 << left) - 1
    right_mask = ((1 << n) - 1) ^ left_mask
    rows = tuple(right_mask if v < left else left_mask for v in range(n))
    return SimpleGraph(n, rows)


def balanced_bipartite(n: int) -> SimpleGraph:
    """K_{floor(n/2), ceil(n/2)}, the Mantel extremal graph."""
    return complete_bipartite(n // 2, n - n // 2)


def random_graph(n: int, density: float, rng: np.random.Generator) -> SimpleGraph:
    """G(n, p) sample drawn from ``rng``."""
    upper = np.triu(rng.random((n, n), dtype=np.float32) < density, k=1)
    return SimpleGraph.from_matrix(upper | upper.T)


def all_graphs(n: int) -> Iterator[SimpleGraph]:
    """Every labelled graph on n vertices, in Gray-code order.

    Consecutive graphs differ in exactly one edge, so each step costs two
    row updates.
    """
    edge_list = pairs(n)
    rows = [0] * n
    yield SimpleGraph(n, tuple(rows))
    for step in range(1, 1 << len(edge_list)):
        u, v = edge_list[(step & -step).bit_length() - 1]
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        yield SimpleGraph(n, tuple(rows))


@dataclass(frozen=True)
class GraphTriple:
    """Three simple graphs on a common vertex set, one per colour."""

    n: int
    g1: SimpleGraph
    g2: SimpleGraph
    g3: SimpleGraph

    def __post_init__(self) -> None:
        for g in (self.g1, self.g2, self.g3):
            if g.n != self.n:
                raise ValidationError(
                    f"member graph has {g.n} vertices, triple has {self.n}"
                )

    @classmethod
    def of(cls, g1: SimpleGraph, g2: SimpleGraph, g3: SimpleGraph) -> GraphTriple:
        """Triple of three graphs on a common vertex count."""
        return cls(g1.n, g1, g2, g3)

    @classmethod
    def identical(cls, g: SimpleGraph) -> GraphTriple:
        """The same graph in every colour."""
        return cls(g.n, g, g, g)

    @classmethod
    def empty(cls, n: int) -> GraphTriple:
        """Three edgeless graphs on n vertices."""
        return cls.identical(SimpleGraph.empty(n))

    @classmethod
    def from_pair_masks(cls, n: int, masks: Sequence[int]) -> GraphTriple:
        """Build from per-pair colour masks listed in lexicographic pair order.

        Bit ``c - 1`` of a mask means the pair is an edge of ``G_c``.
        """
        edge_list = pairs(n)
        if len(masks) != len(edge_list):
            raise ValidationError(
                f"expected {len(edge_list)} pair masks for n={n}, got {len(masks)}"
            )
        rows = [[0] * n for _ in range(3)]
        for (u, v), mask in zip(edge_list, masks):
            for c in range(3):
                if mask >> c & 1:
                    rows[c][u] |= 1 << v
                    rows[c][v] |= 1 << u
        g1, g2, g3 = (SimpleGraph(n, tuple(r)) for r in rows)
        return cls(n, g1, g2, g3)

    @property
    def graphs(self) -> tuple[SimpleGraph, SimpleGraph, SimpleGraph]:
        """(G1, G2, G3)."""
        return (self.g1, self.g2, self.g3)

    def edge_counts(self) -> tuple[int, int, int]:
        """(|E(G1)|, |E(G2)|, |E(G3)|)."""
        return (self.g1.edge_count, self.g2.edge_count, self.g3.edge_count)

    def pair_mask(self, u: int, v: int) -> int:
        """3-bit colour mask of pair uv; bit i set when uv is an edge of G(i+1)."""
        return sum(1 << c for c, g in enumerate(self.graphs) if g.has_edge(u, v))

    def pair_masks(self) -> list[int]:
        """Colour masks of every pair in lexicographic order."""
        return [self.pair_mask(u, v) for u, v in pairs(self.n)]

    def rotate(self) -> GraphTriple:
        """Cyclic relabelling (G1, G2, G3) -> (G2, G3, G1)."""
        return GraphTriple(self.n, self.g2, self.g3, self.g1)


def _spread(row: int, k: int) -> int:
    """Row of a blown-up vertex: each neighbour becomes its k clones."""
    block = (1 << k) - 1
    out = 0
    for v in members(row):
        out |= block << (v * k)
    return out


def _blow_up_graph(g: SimpleGraph, k: int) -> SimpleGraph:
    """Replace each vertex of ``g`` by k independent clones."""
    rows: list[int] = []
    for row in g.rows:
        spread = _spread(row, k)
        rows.extend([spread] * k)
    return SimpleGraph(g.n * k, tuple(rows))


def blow_up(t: GraphTriple, k: int) -> GraphTriple:
    """Replace every vertex v by k independent clones X_v = {v*k, ..., v*k + k - 1}.

    Every edge uv of G_i becomes the k*k edges between X_u and X_v in G_i.
    """
    if k < 1:
        raise ValidationError(f"blow-up factor must be positive, got {k}")
    if t.n * k > Config.MAX_VERTICES:
        raise ValidationError(
            f"blow-up to {t.n * k} vertices exceeds the budget {Config.MAX_VERTICES}"
        )
    if k == 1:
        return t
    logger.debug("blowing up n=%d by k=%d", t.n, k)
    g1, g2, g3 = (_blow_up_graph(g, k) for g in t.graphs)
    return GraphTriple(t.n * k, g1, g2, g3)
