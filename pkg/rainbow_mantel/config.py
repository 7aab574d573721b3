"""Configuration constants for rainbow Mantel experiments."""

import math
import os


class Config:
    """Configuration constants for the rainbow Mantel toolkit."""

    # Vertex budget: 64 * WORD_BUDGET bits per adjacency row
    WORD_BUDGET = 64
    MAX_VERTICES = 64 * WORD_BUDGET

    DEFAULT_SEED = 20190514
    SEED_ENV = "RAINBOW_MANTEL_SEED"
    THREADS_ENV = "RAINBOW_MANTEL_THREADS"

    # search
    EXHAUSTIVE_MAX_N = 4
    BNB_EXACT_MAX_N = 8
    # recursion depth of the pair-by-pair search is C(n, 2)
    BNB_MAX_N = 40
    DEFAULT_BUDGET = 10**9
    DEFAULT_ITERATIONS = 20_000
    SPLIT_PAIRS = 2

    # lemma suite
    LEMMA_EXHAUSTIVE_MAX = 7
    MANTEL_EXHAUSTIVE_MAX = 6
    BIPMAN_EXHAUSTIVE_MAX = 5
    LEMMA_SAMPLES = 10_000
    SAMPLE_MAX_N = 12
    MANTEL_SAMPLE_MAX_N = 16
    BIPMAN_SAMPLE_MAX_N = 40
    NO3PM_MAX_N = 1000
    DENSITIES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)

    # certificate
    DEFAULT_RESOLUTION = 512
    MIN_RESOLUTION = 64
    MAX_REFINE_DEPTH = 10
    TANGENT_RADIUS = 1.0 / 64
    TANGENT_SAMPLES = 200_000
    CHAIN_SAMPLES = 10**6
    IDENTITY_TOLERANCE = 1e-12

    # bench
    BENCH_SIZES = (256, 1024, 4096)
    BENCH_BNB_SIZES = (4,)
    BENCH_DENSITY = 0.5

    @classmethod
    def default_seed(cls) -> int:
        """Seed from RAINBOW_MANTEL_SEED, else the fixed default."""
        value = os.getenv(cls.SEED_ENV)
        return int(value) if value else cls.DEFAULT_SEED

    @classmethod
    def default_threads(cls) -> int:
        """Worker count from RAINBOW_MANTEL_THREADS, else all cores."""
        value = os.getenv(cls.THREADS_ENV)
        if value:
            return max(1, int(value))
        return os.cpu_count() or 1


class Constants:
    """The constant tau = (4 - sqrt 7) / 9 and the quantities built from it."""

    TAU = (4.0 - math.sqrt(7.0)) / 9.0
    TAU_SQUARED = TAU * TAU
    # (1 + tau^2) / 4 = (26 - 2 sqrt 7) / 81
    THRESHOLD = (1.0 + TAU_SQUARED) / 4.0
    DENSITY_LIMIT = (1.0 + TAU_SQUARED) / 2.0

    # right-hand sides of the g1, g2, g3 slack inequalities
    RHS_G1 = TAU_SQUARED
    RHS_G2 = 0.5 + 3.5 * TAU_SQUARED
    RHS_G3 = 0.5 + 1.5 * TAU_SQUARED
