"""The {A, B, C} construction and its edge-count formulas.

Vertices are laid out as A = 0..|A|-1, then B, then C. G1 is a clique on A
plus a clique on B, G2 a clique on A plus a clique on C, and G3 every pair not
inside A. With |B| = |C| = t*n the counts are

    |E1| = |E2| = (2 - 8t + 10t^2)/4 n^2 - (1 - t)/2 n
    |E3|        = (8t - 8t^2)/4 n^2 - t n

and the two leading coefficients agree exactly at t = tau.
"""

import logging
import math
from collections.abc import Iterable
from fractions import Fraction
from typing import TypeVar

import numpy as np

from rainbow_mantel.config import Constants
from rainbow_mantel.graph_core import GraphBuilder, GraphTriple, SimpleGraph
from rainbow_mantel.models import ConstructionParams, DensityReport, ValidationError
from rainbow_mantel.rainbow import count_rainbow_triangles

logger = logging.getLogger(__name__)

Real = TypeVar("Real", float, Fraction)


def validate_params(p: ConstructionParams) -> None:
    """Require 0 < block and a nonempty A.

    Raises:
        ValidationError: If the sizes do not describe a partition {A, B, C}
    """
    if p.block <= 0:
        raise ValidationError(f"block size must be positive, got {p.block}")
    if p.size_a <= 0:
        raise ValidationError(
            f"block size {p.block} leaves A empty for n={p.n} (need 2*block < n)"
        )


def build_construction(p: ConstructionParams) -> GraphTriple:
    """Build the rainbow-free triple G1 = K[A] + K[B], G2 = K[A] + K[C], G3 = K_n - K[A]."""
    validate_params(p)
    n, size_a = p.n, p.size_a
    a_mask = (1 << size_a) - 1
    b_mask = ((1 << p.block) - 1) << size_a
    c_mask = ((1 << p.block) - 1) << (size_a + p.block)

    g1 = GraphBuilder(n).add_clique(a_mask).add_clique(b_mask).build()
    g2 = GraphBuilder(n).add_clique(a_mask).add_clique(c_mask).build()
    full = SimpleGraph.complete(n)
    g3 = SimpleGraph(
        n,
        tuple(row & ~a_mask if v < size_a else row for v, row in enumerate(full.rows)),
    )
    logger.debug("built construction n=%d |A|=%d |B|=|C|=%d", n, size_a, p.block)
    return GraphTriple(n, g1, g2, g3)


def predicted_counts(n: int, t: Real) -> tuple[Real, Real]:
    """Closed-form edge counts (colours 1 and 2, colour 3) at block ratio ``t``.

    Passing ``t`` as a ``Fraction`` keeps the result exact.

    Raises:
        ValidationError: If t is not in the open interval (0, 1/2)
    """
    if not 0 < t < Fraction(1, 2):
        raise ValidationError(f"t must lie in (0, 1/2), got {t}")
    n2 = n * n
    e12 = (2 - 8 * t + 10 * t * t) / 4 * n2 - (1 - t) / 2 * n
    e3 = (8 * t - 8 * t * t) / 4 * n2 - t * n
    return e12, e3


def beats_quarter(p: ConstructionParams) -> bool:
    """True iff every colour class of the built triple has more than n**2 / 4 edges."""
    t = build_construction(p)
    return 4 * min(t.edge_counts()) > p.n * p.n


def construction_report(p: ConstructionParams) -> DensityReport:
    t = build_construction(p)
    return DensityReport(
        n=p.n,
        block=p.block,
        edges=t.edge_counts(),
        rainbow_count=count_rainbow_triangles(t),
    )


def balancing_root() -> float:
    """Root in (0, 1/2) of 2 - 8t + 10t^2 = 8t - 8t^2, i.e. of 9t^2 - 8t + 1 = 0."""
    roots = np.roots([18.0, -16.0, 2.0])
    inside = [float(r.real) for r in roots if abs(r.imag) < 1e-15 and 0 < r.real < 0.5]
    if len(inside) != 1:
        raise ValidationError(f"expected one balancing root in (0, 1/2), got {inside}")
    return inside[0]


def near_tau_block(n: int) -> int:
    """round(tau * n), halves rounded up."""
    return math.floor(Constants.TAU * n + 0.5)


def tightness_sweep(ns: Iterable[int]) -> list[DensityReport]:
    """Density reports of the near-tau construction; min_density rises toward (1 + tau^2) / 4."""
    reports = []
    for n in ns:
        report = construction_report(ConstructionParams(n, near_tau_block(n)))
        logger.info("n=%d block=%d min_density=%.6f", n, report.block, report.min_density)
        reports.append(report)
    return reports


def pair_sum_slack(t: GraphTriple) -> float:
    """min over i < j of |E_i| + |E_j| - ((1 + tau^2)/2 n^2 + 3/2 n).

    A non-negative value forces a rainbow triangle, so rainbow-free triples
    always come out negative.
    """
    e = t.edge_counts()
    bound = Constants.DENSITY_LIMIT * t.n * t.n + 1.5 * t.n
    return min(e[0] + e[1], e[0] + e[2], e[1] + e[2]) - bound
