"""Throughput measurements for rainbow counting and branch and bound."""

import logging
import time
from collections.abc import Iterable

import numpy as np

from rainbow_mantel.config import Config
from rainbow_mantel.graph_core import GraphTriple, random_graph
from rainbow_mantel.models import BenchRow
from rainbow_mantel.rainbow import count_rainbow_triangles
from rainbow_mantel.search import branch_and_bound_R

logger = logging.getLogger(__name__)


def random_triple(
    n: int, rng: np.random.Generator, density: float = Config.BENCH_DENSITY
) -> GraphTriple:
    """Three independent G(n, density) graphs from ``rng``."""
    g1, g2, g3 = (random_graph(n, density, rng) for _ in range(3))
    return GraphTriple(n, g1, g2, g3)


def bench_count(n: int, rng: np.random.Generator) -> BenchRow:
    """Time one ordered rainbow count on a random triple; work is the count itself."""
    t = random_triple(n, rng)
    start = time.perf_counter()
    count = count_rainbow_triangles(t)
    seconds = time.perf_counter() - start
    logger.info("count n=%d: %d rainbow triangles in %.3fs", n, count, seconds)
    return BenchRow("count", n, count, seconds)


def bench_bnb(n: int) -> BenchRow:
    """Time a single-threaded branch and bound; work is the node count."""
    outcome = branch_and_bound_R(n, threads=1)
    return BenchRow("bnb", n, outcome.nodes_visited, outcome.wall_time)


def run_bench(
    sizes: Iterable[int] = Config.BENCH_SIZES,
    bnb_sizes: Iterable[int] = Config.BENCH_BNB_SIZES,
    seed: int = Config.DEFAULT_SEED,
) -> list[BenchRow]:
    """Time rainbow counting on random triples and branch and bound; one row per size."""
    rng = np.random.default_rng(seed)
    rows = [bench_count(n, rng) for n in sizes]
    rows.extend(bench_bnb(n) for n in bnb_sizes)
    return rows
