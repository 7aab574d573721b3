"""Search for R(n), the largest min_i |E(G_i)| over rainbow-free triples on n vertices.

The state space is one colour mask (a subset of {1, 2, 3}, bit c-1 for colour
c) per vertex pair, with pairs in lexicographic order. A triangle x < y < z is
complete once its last pair (y, z) is assigned, which is when its rainbow
status is checked.
"""

import itertools
import logging
import threading
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from rainbow_mantel.config import Config
from rainbow_mantel.constructions import build_construction, near_tau_block
from rainbow_mantel.graph_core import GraphTriple, balanced_bipartite, members, pairs
from rainbow_mantel.models import (
    CertificationError,
    ConstructionParams,
    InitStrategy,
    SearchLimitError,
    SearchMode,
    SearchOutcome,
    ValidationError,
)
from rainbow_mantel.rainbow import (
    RAINBOW_TABLE,
    count_rainbow_triangles,
    is_rainbow_masks,
    min_edge_count,
)

logger = logging.getLogger(__name__)

# popcount of a colour mask
_WEIGHT = tuple(m.bit_count() for m in range(8))
_FLUSH_EVERY = 1024


def _check_n(n: int) -> None:
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}")


def mantel_floor(n: int) -> int:
    """floor(n^2 / 4), attained by the identical complete bipartite triple."""
    return n * n // 4


def verify_witness(t: GraphTriple, value: int) -> None:
    """Independently re-check a search witness before it is reported.

    Raises:
        CertificationError: If the witness has a rainbow triangle or the wrong value
    """
    rainbow = count_rainbow_triangles(t)
    if rainbow:
        raise CertificationError(f"witness for n={t.n} has {rainbow} rainbow triangles")
    actual = min_edge_count(t)
    if actual != value:
        raise CertificationError(
            f"witness for n={t.n} has min edge count {actual}, reported {value}"
        )


def _triangles(n: int) -> list[tuple[int, int, int]]:
    """Pair indices (xy, yz, xz) of every triangle x < y < z."""
    index = {pair: i for i, pair in enumerate(pairs(n))}
    return [
        (index[x, y], index[y, z], index[x, z])
        for x, y, z in itertools.combinations(range(n), 3)
    ]


# === EXHAUSTIVE ===


def exhaustive_R(n: int) -> SearchOutcome:
    """Exact R(n) by enumerating every (G1, G2, G3) for n <= 4.

    Each graph is a bit mask over the C(n, 2) pairs. A candidate is skipped
    as soon as a colour has no more edges than the best value so far.

    Raises:
        SearchLimitError: If n exceeds the enumeration limit
    """
    _check_n(n)
    if n > Config.EXHAUSTIVE_MAX_N:
        raise SearchLimitError(
            f"exhaustive search is limited to n <= {Config.EXHAUSTIVE_MAX_N}; "
            f"use branch_and_bound_R (--mode bnb) for n={n}"
        )
    start = time.perf_counter()
    m = n * (n - 1) // 2
    triangles = _triangles(n)
    graphs_by_size = sorted(range(1 << m), key=lambda g: (-g.bit_count(), g))

    best, best_graphs, visited = -1, (0, 0, 0), 0
    for g1 in graphs_by_size:
        e1 = g1.bit_count()
        if e1 <= best:
            break
        for g2 in graphs_by_size:
            e2 = g2.bit_count()
            if e2 <= best:
                break
            for g3 in graphs_by_size:
                e3 = g3.bit_count()
                if e3 <= best:
                    break
                visited += 1
                if not _has_rainbow(g1, g2, g3, triangles):
                    best, best_graphs = min(e1, e2, e3), (g1, g2, g3)
                    break

    masks = [
        sum(1 << c for c, g in enumerate(best_graphs) if g >> p & 1) for p in range(m)
    ]
    witness = GraphTriple.from_pair_masks(n, masks)
    value = max(best, 0)
    verify_witness(witness, value)
    elapsed = time.perf_counter() - start
    logger.info("exhaustive R(%d) = %d after %d triples", n, value, visited)
    return SearchOutcome(n, value, True, witness, visited, elapsed, SearchMode.EXHAUSTIVE)


def _has_rainbow(
    g1: int, g2: int, g3: int, triangles: Sequence[tuple[int, int, int]]
) -> bool:
    for xy, yz, xz in triangles:
        m_xy = (g1 >> xy & 1) | (g2 >> xy & 1) << 1 | (g3 >> xy & 1) << 2
        m_yz = (g1 >> yz & 1) | (g2 >> yz & 1) << 1 | (g3 >> yz & 1) << 2
        m_xz = (g1 >> xz & 1) | (g2 >> xz & 1) << 1 | (g3 >> xz & 1) << 2
        if RAINBOW_TABLE[m_xy | m_yz << 3 | m_xz << 6]:
            return True
    return False


# === BRANCH AND BOUND ===


class _BudgetExhausted(Exception):
    pass


class _SharedBound:
    """Best value seen by any worker plus the global node count."""

    def __init__(self, value: int, budget: int):
        self._lock = threading.Lock()
        self.value = value
        self.nodes = 0
        self.budget = budget
        self.exhausted = False

    def raise_to(self, value: int) -> None:
        with self._lock:
            if value > self.value:
                self.value = value

    def add_nodes(self, count: int) -> bool:
        """Record work; False once the budget is spent."""
        with self._lock:
            self.nodes += count
            if self.nodes > self.budget:
                self.exhausted = True
            return not self.exhausted


@dataclass
class _JobResult:
    value: int
    masks: Optional[list[int]]
    nodes: int


class _BranchAndBound:
    """Depth-first search over one subtree fixed by a prefix of pair masks.

    Pruning against this worker's own best is non-strict; pruning against the
    shared bound is strict. A worker therefore always finds the
    lexicographically least optimum of its subtree, whatever the other
    workers have reported.
    """

    def __init__(
        self,
        n: int,
        closing: list[list[tuple[int, int]]],
        seed_value: int,
        shared: _SharedBound,
    ):
        self.n = n
        self.edge_list = pairs(n)
        self.m = len(self.edge_list)
        self.closing = closing
        self.masks = [0] * self.m
        self.counts = [0, 0, 0]
        self.degrees = [0] * n
        self.best = seed_value
        self.best_masks: Optional[list[int]] = None
        self.shared = shared
        self.nodes = 0
        self._unflushed = 0

    def run(self, prefix: Sequence[int]) -> _JobResult:
        if self.shared.exhausted:
            return _JobResult(self.best, None, 0)
        for p, mask in enumerate(prefix):
            if not self._admissible(p, mask):
                return _JobResult(self.best, None, self.nodes)
            self._apply(p, mask, 1)
            if not self._symmetric(p):
                return _JobResult(self.best, None, self.nodes)
        try:
            self._dfs(len(prefix))
        except _BudgetExhausted:
            pass
        self.shared.add_nodes(self._unflushed)
        return _JobResult(self.best, self.best_masks, self.nodes)

    def _admissible(self, p: int, mask: int) -> bool:
        masks = self.masks
        shifted = mask << 3
        for xy, xz in self.closing[p]:
            if RAINBOW_TABLE[masks[xy] | shifted | masks[xz] << 6]:
                return False
        return True

    def _apply(self, p: int, mask: int, sign: int) -> None:
        self.masks[p] = mask if sign > 0 else 0
        for c in range(3):
            if mask >> c & 1:
                self.counts[c] += sign
        u, v = self.edge_list[p]
        self.degrees[u] += sign * _WEIGHT[mask]
        self.degrees[v] += sign * _WEIGHT[mask]

    def _symmetric(self, p: int) -> bool:
        """Vertex 0 keeps the largest total colour degree.

        Its degree is final once pair (0, n-1) at index n-2 is assigned;
        other degrees only grow, so exceeding it is already fatal.
        """
        last_of_zero = self.n - 2
        if p < last_of_zero:
            return True
        top = self.degrees[0]
        if p == last_of_zero:
            return all(d <= top for d in self.degrees[1:])
        u, v = self.edge_list[p]
        return self.degrees[u] <= top and self.degrees[v] <= top

    def _tick(self) -> None:
        self.nodes += 1
        self._unflushed += 1
        if self._unflushed >= _FLUSH_EVERY:
            ok = self.shared.add_nodes(self._unflushed)
            self._unflushed = 0
            if not ok:
                raise _BudgetExhausted

    def _dfs(self, p: int) -> None:
        self._tick()
        if p == self.m:
            value = min(self.counts)
            if value > self.best:
                self.best = value
                self.best_masks = list(self.masks)
                self.shared.raise_to(value)
            return
        remaining = self.m - p - 1
        for mask in range(8):
            if not self._admissible(p, mask):
                continue
            self._apply(p, mask, 1)
            bound = min(self.counts) + remaining
            if bound > self.best and bound >= self.shared.value and self._symmetric(p):
                self._dfs(p + 1)
            self._apply(p, mask, -1)


def _closing_pairs(n: int) -> list[list[tuple[int, int]]]:
    """For each pair index (y, z): the (xy, xz) index pairs of triangles it completes."""
    closing: list[list[tuple[int, int]]] = [[] for _ in range(n * (n - 1) // 2)]
    for xy, yz, xz in _triangles(n):
        closing[yz].append((xy, xz))
    return closing


def branch_and_bound_R(
    n: int,
    budget: int = Config.DEFAULT_BUDGET,
    threads: int = 1,
) -> SearchOutcome:
    """R(n) by branch and bound over pair colour masks.

    The search is seeded with floor(n^2/4) - 1 so only triples beating the
    identical complete bipartite triple are explored; that triple is the
    fallback witness. The first ``Config.SPLIT_PAIRS`` pairs split the tree
    into jobs run on ``threads`` worker threads. The jobs are pure Python and
    hold the GIL, so extra threads interleave jobs and share the incumbent
    bound but do not add CPU parallelism. The merged result takes the largest
    value and, among equals, the earliest job, so value and witness do not
    depend on the worker count.

    Raises:
        SearchLimitError: If n is beyond what the recursive search supports
    """
    _check_n(n)
    if n > Config.BNB_MAX_N:
        raise SearchLimitError(
            f"branch and bound is limited to n <= {Config.BNB_MAX_N}; "
            f"use local_search_R (--mode local) for n={n}"
        )
    if budget < 1:
        raise ValidationError(f"budget must be positive, got {budget}")
    start = time.perf_counter()
    m = n * (n - 1) // 2
    seed_value = mantel_floor(n) - 1
    closing = _closing_pairs(n)
    shared = _SharedBound(seed_value, budget)
    prefixes = list(itertools.product(range(8), repeat=min(Config.SPLIT_PAIRS, m)))

    def job(prefix: tuple[int, ...]) -> _JobResult:
        return _BranchAndBound(n, closing, seed_value, shared).run(prefix)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, prefixes))
    else:
        results = [job(prefix) for prefix in prefixes]

    value, masks = seed_value, None
    for result in results:
        if result.masks is not None and result.value > value:
            value, masks = result.value, result.masks
    nodes = sum(r.nodes for r in results)

    if masks is None:
        witness = GraphTriple.identical(balanced_bipartite(n))
        value = mantel_floor(n)
    else:
        witness = GraphTriple.from_pair_masks(n, masks)
    verify_witness(witness, value)
    exact = not shared.exhausted
    if not exact:
        logger.warning("node budget %d exhausted at n=%d; value is a lower bound", budget, n)
    elapsed = time.perf_counter() - start
    logger.info("bnb R(%d) %s %d, %d nodes", n, "=" if exact else ">=", value, nodes)
    return SearchOutcome(n, value, exact, witness, nodes, elapsed, SearchMode.BNB)


# === LOCAL SEARCH ===


def initial_triple(
    n: int, init: InitStrategy, block: Optional[int] = None
) -> GraphTriple:
    """Starting point of local search.

    Raises:
        ValidationError: If the construction block does not fit n
    """
    if init is InitStrategy.CONSTRUCTION:
        size = block if block is not None else near_tau_block(n)
        return build_construction(ConstructionParams(n, size))
    return GraphTriple.identical(balanced_bipartite(n))


class _LocalState:
    """Pair masks with per-colour adjacency rows for O(n) rainbow checks."""

    def __init__(self, t: GraphTriple):
        self.n = t.n
        self.edge_list = pairs(t.n)
        self.masks = t.pair_masks()
        self.rows = [list(g.rows) for g in t.graphs]
        self.counts = list(t.edge_counts())

    def _mask(self, u: int, v: int) -> int:
        r = self.rows
        return (r[0][u] >> v & 1) | (r[1][u] >> v & 1) << 1 | (r[2][u] >> v & 1) << 2

    def creates_rainbow(self, u: int, v: int, mask: int) -> bool:
        r = self.rows
        touch_u = r[0][u] | r[1][u] | r[2][u]
        touch_v = r[0][v] | r[1][v] | r[2][v]
        for w in members(touch_u & touch_v):
            if is_rainbow_masks(mask, self._mask(u, w), self._mask(v, w)):
                return True
        return False

    def toggle(self, p: int, color: int) -> None:
        u, v = self.edge_list[p]
        self.masks[p] ^= 1 << color
        row = self.rows[color]
        row[u] ^= 1 << v
        row[v] ^= 1 << u
        self.counts[color] += 1 if self.masks[p] >> color & 1 else -1


def local_search_R(
    n: int,
    seed: int = Config.DEFAULT_SEED,
    iterations: int = Config.DEFAULT_ITERATIONS,
    init: InitStrategy = InitStrategy.BIPARTITE,
    block: Optional[int] = None,
) -> SearchOutcome:
    """Lower bound on R(n) by randomized local search.

    Each step toggles one colour on one pair. The move is kept if the triple
    stays rainbow-free and min_i |E(G_i)| does not drop; the best triple seen
    is reported. All moves come from one seeded numpy generator.
    """
    _check_n(n)
    if iterations < 0:
        raise ValidationError(f"iterations must be non-negative, got {iterations}")
    start = time.perf_counter()
    current = initial_triple(n, init, block)
    state = _LocalState(current)
    value = min(state.counts)
    best_value, best_masks = value, list(state.masks)
    m = len(state.edge_list)

    if m:
        rng = np.random.default_rng(seed)
        moves = rng.integers(0, m, size=iterations)
        colors = rng.integers(0, 3, size=iterations)
        for p, color in zip(moves.tolist(), colors.tolist()):
            new_mask = state.masks[p] ^ (1 << color)
            adding = bool(new_mask >> color & 1)
            if adding:
                u, v = state.edge_list[p]
                if state.creates_rainbow(u, v, new_mask):
                    continue
            elif state.counts[color] - 1 < value:
                continue
            state.toggle(p, color)
            value = min(state.counts)
            if value > best_value:
                best_value, best_masks = value, list(state.masks)
                logger.debug("local search n=%d improved to %d", n, value)

    witness = GraphTriple.from_pair_masks(n, best_masks) if m else current
    verify_witness(witness, best_value)
    elapsed = time.perf_counter() - start
    logger.info("local search R(%d) >= %d (seed %d)", n, best_value, seed)
    return SearchOutcome(n, best_value, False, witness, iterations, elapsed, SearchMode.LOCAL)


def run_search(
    n: int,
    mode: SearchMode,
    *,
    budget: int = Config.DEFAULT_BUDGET,
    threads: int = 1,
    seed: int = Config.DEFAULT_SEED,
    iterations: int = Config.DEFAULT_ITERATIONS,
    init: InitStrategy = InitStrategy.BIPARTITE,
    block: Optional[int] = None,
) -> SearchOutcome:
    """Dispatch to the solver named by ``mode``."""
    if mode is SearchMode.EXHAUSTIVE:
        return exhaustive_R(n)
    if mode is SearchMode.BNB:
        return branch_and_bound_R(n, budget=budget, threads=threads)
    return local_search_R(n, seed=seed, iterations=iterations, init=init, block=block)
