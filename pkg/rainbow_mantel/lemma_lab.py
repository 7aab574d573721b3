"""Brute-force and sampled checks of the counting lemmas behind the rainbow bound.

Every check returns a plain verdict on one input; ``run_lemma_suite`` drives
them over exhaustive enumerations and seeded random samples and returns one
:class:`LemmaResult` per batch.
"""

import itertools
import logging
import time
from collections.abc import Callable, Iterator
from typing import Optional

import numpy as np

from rainbow_mantel.config import Config, Constants
from rainbow_mantel.graph_core import (
    Edge,
    GraphBuilder,
    GraphTriple,
    SimpleGraph,
    VertexSet,
    all_graphs,
    balanced_bipartite,
    common_neighbor_pairs,
    e_between,
    e_within,
    greedy_maximal_matching,
    is_triangle_free,
    members,
    pairs,
    random_graph,
    vertex_set,
)
from rainbow_mantel.models import (
    DigonCase,
    DigonReport,
    DigonSceneOutcome,
    LemmaResult,
    ValidationError,
)
from rainbow_mantel.rainbow import find_rainbow_triangle, triple_pairs

logger = logging.getLogger(__name__)


# === COMMON-NEIGHBOUR PAIRS AND MANTEL ===


def check_lemma_count(g: SimpleGraph) -> bool:
    """|P| >= |E| - |M| for the greedy maximal matching M."""
    matching = greedy_maximal_matching(g)
    return common_neighbor_pairs(g) >= g.edge_count - len(matching)


def matching_injection(g: SimpleGraph) -> dict[Edge, Edge]:
    """The map e -> e xor e_s(e) from edges outside the greedy matching into P.

    ``s(e)`` is the first matching edge, in matching order, meeting ``e``.
    """
    matching = greedy_maximal_matching(g)
    in_matching = set(matching)
    image: dict[Edge, Edge] = {}
    for e in g.edges():
        if e in in_matching:
            continue
        hit = next(f for f in matching if set(e) & set(f))
        x, y = sorted(set(e) ^ set(hit))
        image[e] = (x, y)
    return image


def check_injection(g: SimpleGraph) -> bool:
    """The matching map is injective and every image pair has a common neighbour."""
    image = matching_injection(g)
    targets = list(image.values())
    if len(set(targets)) != len(targets):
        return False
    return all(g.rows[x] & g.rows[y] for x, y in targets)


def check_mantel(g: SimpleGraph) -> bool:
    """Triangle-free graphs have at most n^2/4 edges; true vacuously otherwise."""
    if not is_triangle_free(g):
        return True
    return 4 * g.edge_count <= g.n * g.n


def check_mantel_chain(g: SimpleGraph) -> bool:
    """Each step of the short Mantel argument on a triangle-free graph.

    |P| + |E| <= C(n, 2), |E| - n/2 <= |E| - |M| <= |P|, hence
    2|E| <= C(n, 2) + n/2. Non-triangle-free graphs pass vacuously.
    """
    if not is_triangle_free(g):
        return True
    n, e = g.n, g.edge_count
    p = common_neighbor_pairs(g)
    m = len(greedy_maximal_matching(g))
    pairs_total = n * (n - 1) // 2
    return (
        p + e <= pairs_total
        and 2 * m <= n
        and e - m <= p
        and 4 * e <= 2 * pairs_total + n
    )


# === BIPARTITION LEMMA ===


def _is_clique(g: SimpleGraph, x: VertexSet) -> bool:
    return all((x & ~(1 << v)) & ~g.rows[v] == 0 for v in members(x))


def check_bipman(g: SimpleGraph, z0: VertexSet, z1: VertexSet) -> Optional[bool]:
    """e(Z0, Z1) <= e(Z0) + e(Z1) + (|Z0| + |Z1|)/2 under the clique hypothesis.

    Returns:
        None if some z in Z_i has N(z) & Z_(1-i) not a clique, else the verdict

    Raises:
        ValidationError: If {Z0, Z1} is not a partition of the vertex set
    """
    if z0 & z1 or (z0 | z1) != g.universe:
        raise ValidationError("Z0 and Z1 must partition the vertex set")
    for side, other in ((z0, z1), (z1, z0)):
        for z in members(side):
            if not _is_clique(g, g.rows[z] & other):
                return None
    lhs = 2 * e_between(g, z0, z1)
    rhs = 2 * e_within(g, z0) + 2 * e_within(g, z1) + g.n
    return lhs <= rhs


def clique_component_slack(l: int, m: int) -> int:
    """|D| - |C| for a clique with l vertices in Z0 and m in Z1: C(l,2) + C(m,2) - l*m."""
    return l * (l - 1) // 2 + m * (m - 1) // 2 - l * m


def random_clique_union(
    n: int, rng: np.random.Generator
) -> tuple[SimpleGraph, VertexSet, VertexSet]:
    """Disjoint union of cliques with a random bipartition; always meets the clique hypothesis."""
    components = int(rng.integers(1, n + 1)) if n else 1
    labels = rng.integers(0, components, size=n)
    builder = GraphBuilder(n)
    for label in range(components):
        builder.add_clique(vertex_set(np.flatnonzero(labels == label).tolist()))
    sides = rng.integers(0, 2, size=n)
    z0 = vertex_set(np.flatnonzero(sides == 0).tolist())
    return builder.build(), z0, ((1 << n) - 1) ^ z0


def random_triangle_free(n: int, rng: np.random.Generator) -> SimpleGraph:
    """Maximal triangle-free graph grown by adding pairs in random order."""
    edge_list = pairs(n)
    rows = [0] * n
    for index in rng.permutation(len(edge_list)).tolist():
        u, v = edge_list[index]
        if not rows[u] & rows[v]:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    return SimpleGraph(n, tuple(rows))


# === NO-TRIPLE-PAIR ARITHMETIC ===


def no3pm_slack(n: int, l: int) -> float:
    """Closed-form slack tau^2 * l * (n - l/2) + 3l/2."""
    return Constants.TAU_SQUARED * l * (n - l / 2) + 1.5 * l


def check_no3pm_arithmetic(n: int, l: int) -> bool:
    """(1+tau^2)/2 n^2 + 3/2 n - l n + l^2/2 >= (1+tau^2)/2 (n-l)^2 + 3/2 (n-l).

    Raises:
        ValidationError: If l is outside 0..n
    """
    if not 0 <= l <= n:
        raise ValidationError(f"need 0 <= l <= n, got l={l}, n={n}")
    half = Constants.DENSITY_LIMIT
    m = n - l
    lhs = half * n * n + 1.5 * n - l * n + l * l / 2
    rhs = half * m * m + 1.5 * m
    return lhs >= rhs


def sweep_no3pm(max_n: int = Config.NO3PM_MAX_N) -> tuple[int, int]:
    """Check every 1 <= l <= n <= max_n at once; returns (checked, failures)."""
    rows, cols = np.triu_indices(max_n + 1)
    keep = rows >= 1
    l = rows[keep].astype(np.float64)
    n = cols[keep].astype(np.float64)
    half = Constants.DENSITY_LIMIT
    m = n - l
    lhs = half * n * n + 1.5 * n - l * n + l * l / 2
    rhs = half * m * m + 1.5 * m
    return int(keep.sum()), int(np.count_nonzero(lhs < rhs))


# === DIGON SCENES ===
#
# Scene vertices: X = {0, 1}, X' = {2, 3}. Pair indices follow pairs(4):
# 01, 02, 03, 12, 13, 23, so 02, 03, 12, 13 are the cross pairs.

_CROSS = (1, 2, 3, 4)
_DISJOINT_CROSS = ((1, 4), (2, 3))


def _bit(color: int) -> int:
    return 1 << (color - 1)


def _check_colors(colors: tuple[int, int, int]) -> None:
    if sorted(colors) != [1, 2, 3]:
        raise ValidationError(f"colors must be a permutation of (1, 2, 3), got {colors}")


def classify_digon_case1(counts: tuple[int, int, int]) -> DigonCase:
    """Case label from the cross counts (e_i, e_j, e_k) when both digons use {i, j}."""
    e_i, e_j, e_k = counts
    if e_k == 0:
        return DigonCase.CASE_1A
    if e_k == 1 and e_i <= 2 and e_j <= 2:
        return DigonCase.CASE_1B
    if e_k == 2 and e_i == 0 and e_j == 0:
        return DigonCase.CASE_1C
    return DigonCase.VIOLATION


def classify_digon_case2(counts: tuple[int, int, int]) -> DigonCase:
    """Case label from (e_i, e_j, e_k) when X uses {i, j} and X' uses {i, k}."""
    if sum(counts) <= 4:
        return DigonCase.CASE_2A
    if counts == (3, 1, 1):
        return DigonCase.CASE_2B
    return DigonCase.VIOLATION


def digon_scene_outcome(
    scene: int,
    cross_masks: tuple[int, int, int, int],
    colors: tuple[int, int, int] = (1, 2, 3),
) -> Optional[DigonSceneOutcome]:
    """Classify one assignment of colour masks to the cross pairs 02, 03, 12, 13.

    Returns None when the configuration is filtered out: it has a rainbow
    triangle, a pair in all three colours, or (scene 1 only) two disjoint
    cross edges of colour k.

    Raises:
        ValidationError: On an unknown scene or a bad colour assignment
    """
    _check_colors(colors)
    i, j, k = colors
    if scene == 1:
        inner_x, inner_x2 = _bit(i) | _bit(j), _bit(i) | _bit(j)
    elif scene == 2:
        inner_x, inner_x2 = _bit(i) | _bit(j), _bit(i) | _bit(k)
    else:
        raise ValidationError(f"scene must be 1 or 2, got {scene}")

    masks = [inner_x, *cross_masks, inner_x2]
    triple = GraphTriple.from_pair_masks(4, masks)
    if find_rainbow_triangle(triple) is not None or triple_pairs(triple):
        return None
    if scene == 1 and any(
        masks[a] & _bit(k) and masks[b] & _bit(k) for a, b in _DISJOINT_CROSS
    ):
        return None

    counts = (
        sum(bool(masks[p] & _bit(i)) for p in _CROSS),
        sum(bool(masks[p] & _bit(j)) for p in _CROSS),
        sum(bool(masks[p] & _bit(k)) for p in _CROSS),
    )
    classify = classify_digon_case1 if scene == 1 else classify_digon_case2
    return DigonSceneOutcome(classify(counts), counts)


def _enumerate_digon_scene(scene: int, colors: tuple[int, int, int]) -> DigonReport:
    report = DigonReport(scene=scene, colors=colors, configurations=0, filtered=0)
    for cross in itertools.product(range(8), repeat=4):
        report.configurations += 1
        outcome = digon_scene_outcome(scene, cross, colors)
        if outcome is None:
            report.filtered += 1
            continue
        label = outcome.case.value
        report.case_counts[label] = report.case_counts.get(label, 0) + 1
        if outcome.case is DigonCase.VIOLATION:
            logger.warning("digon scene %d violation: cross masks %s", scene, cross)
    return report


def enumerate_digon_case1(colors: tuple[int, int, int] = (1, 2, 3)) -> DigonReport:
    """All 8^4 cross configurations between two digons both coloured {i, j}."""
    return _enumerate_digon_scene(1, colors)


def enumerate_digon_case2(colors: tuple[int, int, int] = (1, 2, 3)) -> DigonReport:
    """All 8^4 cross configurations between digons coloured {i, j} and {i, k}."""
    return _enumerate_digon_scene(2, colors)


# === SUITE ===


def _timed(
    name: str, body: Callable[[], tuple[int, int, int]], detail: str = ""
) -> LemmaResult:
    start = time.perf_counter()
    checked, failures, not_applicable = body()
    seconds = time.perf_counter() - start
    logger.info("%s: %d checked, %d failures (%.2fs)", name, checked, failures, seconds)
    return LemmaResult(name, checked, failures, not_applicable, seconds, detail)


def _graphs_up_to(max_n: int) -> Iterator[SimpleGraph]:
    for n in range(max_n + 1):
        yield from all_graphs(n)


def _sampled_graphs(
    rng: np.random.Generator, samples: int, max_n: int
) -> Iterator[SimpleGraph]:
    for density in Config.DENSITIES:
        for n in rng.integers(1, max_n + 1, size=samples).tolist():
            yield random_graph(n, density, rng)


def _count_failures(
    graphs: Iterator[SimpleGraph], check: Callable[[SimpleGraph], bool]
) -> tuple[int, int, int]:
    checked = failures = 0
    for g in graphs:
        checked += 1
        if not check(g):
            failures += 1
    return checked, failures, 0


def _bipman_exhaustive(max_n: int) -> tuple[int, int, int]:
    checked = failures = skipped = 0
    for g in _graphs_up_to(max_n):
        for z0 in range(1 << g.n):
            verdict = check_bipman(g, z0, g.universe ^ z0)
            checked += 1
            if verdict is None:
                skipped += 1
            elif not verdict:
                failures += 1
    return checked, failures, skipped


def _bipman_sampled(rng: np.random.Generator, samples: int) -> tuple[int, int, int]:
    checked = failures = 0
    for n in rng.integers(1, Config.BIPMAN_SAMPLE_MAX_N + 1, size=samples).tolist():
        g, z0, z1 = random_clique_union(n, rng)
        checked += 1
        if check_bipman(g, z0, z1) is not True:
            failures += 1
    return checked, failures, 0


def _mantel_tight() -> tuple[int, int, int]:
    sizes = range(2, Config.MANTEL_SAMPLE_MAX_N + 1, 2)
    failures = sum(4 * balanced_bipartite(n).edge_count != n * n for n in sizes)
    return len(sizes), failures, 0


def _component_identity() -> tuple[int, int, int]:
    grid = list(itertools.product(range(Config.BIPMAN_SAMPLE_MAX_N + 1), repeat=2))
    failures = sum(
        2 * clique_component_slack(l, m) != (l - m) ** 2 - (l + m) for l, m in grid
    )
    return len(grid), failures, 0


def _digon_batch(scene: int) -> tuple[int, int, int]:
    checked = violations = 0
    for colors in itertools.permutations((1, 2, 3)):
        report = _enumerate_digon_scene(scene, colors)
        checked += report.configurations
        violations += report.violations
    return checked, violations, 0


def run_lemma_suite(
    exhaustive_max: int = Config.LEMMA_EXHAUSTIVE_MAX,
    samples: int = Config.LEMMA_SAMPLES,
    seed: int = Config.DEFAULT_SEED,
) -> list[LemmaResult]:
    """Run every lemma check over exhaustive and seeded sampled inputs.

    Args:
        exhaustive_max: Largest n enumerated exhaustively for the counting lemma;
            the Mantel and bipartition enumerations are further capped by config
        samples: Random inputs per edge density (and per sampled batch)
        seed: Seed of the single numpy generator behind every sample

    Raises:
        ValidationError: If the limits are negative
    """
    if exhaustive_max < 0 or samples < 0:
        raise ValidationError("exhaustive-max and samples must be non-negative")
    rng = np.random.default_rng(seed)
    mantel_max = min(exhaustive_max, Config.MANTEL_EXHAUSTIVE_MAX)
    bipman_max = min(exhaustive_max, Config.BIPMAN_EXHAUSTIVE_MAX)

    results = [
        _timed(
            "lemma_count_exhaustive",
            lambda: _count_failures(_graphs_up_to(exhaustive_max), check_lemma_count),
            f"all graphs, n <= {exhaustive_max}",
        ),
        _timed(
            "lemma_count_sampled",
            lambda: _count_failures(
                _sampled_graphs(rng, samples, Config.SAMPLE_MAX_N), check_lemma_count
            ),
            f"G(n, p), n <= {Config.SAMPLE_MAX_N}",
        ),
        _timed(
            "matching_injection",
            lambda: _count_failures(
                _sampled_graphs(rng, max(1, samples // 10), Config.SAMPLE_MAX_N),
                check_injection,
            ),
            "e -> e xor e_s(e) is injective into P",
        ),
        _timed(
            "mantel_exhaustive",
            lambda: _count_failures(_graphs_up_to(mantel_max), check_mantel),
            f"all graphs, n <= {mantel_max}",
        ),
        _timed(
            "mantel_chain",
            lambda: _count_failures(_graphs_up_to(mantel_max), check_mantel_chain),
            f"all graphs, n <= {mantel_max}",
        ),
        _timed(
            "mantel_sampled",
            lambda: _count_failures(
                (
                    random_triangle_free(n, rng)
                    for n in rng.integers(
                        1, Config.MANTEL_SAMPLE_MAX_N + 1, size=samples
                    ).tolist()
                ),
                check_mantel,
            ),
            f"maximal triangle-free, n <= {Config.MANTEL_SAMPLE_MAX_N}",
        ),
        _timed("mantel_tight", _mantel_tight, "K_{n/2,n/2} has n^2/4 edges"),
        _timed(
            "bipman_exhaustive",
            lambda: _bipman_exhaustive(bipman_max),
            f"all graphs and partitions, n <= {bipman_max}",
        ),
        _timed(
            "bipman_sampled",
            lambda: _bipman_sampled(rng, samples),
            f"clique unions, n <= {Config.BIPMAN_SAMPLE_MAX_N}",
        ),
        _timed(
            "clique_component_identity",
            _component_identity,
            "C(l,2) + C(m,2) - lm = (l-m)^2/2 - (l+m)/2",
        ),
        _timed("digon_case1", lambda: _digon_batch(1), "8^4 cross masks x 6 colourings"),
        _timed("digon_case2", lambda: _digon_batch(2), "8^4 cross masks x 6 colourings"),
        _timed(
            "no3pm_arithmetic",
            lambda: (*sweep_no3pm(Config.NO3PM_MAX_N), 0),
            f"1 <= l <= n <= {Config.NO3PM_MAX_N}",
        ),
    ]
    return results
