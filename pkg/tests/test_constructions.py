"""Tests for the {A, B, C} construction and its closed forms."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rainbow_mantel.config import Constants
from rainbow_mantel.constructions import (
    balancing_root,
    beats_quarter,
    build_construction,
    construction_report,
    near_tau_block,
    pair_sum_slack,
    predicted_counts,
    tightness_sweep,
    validate_params,
)
from rainbow_mantel.models import ConstructionParams, ValidationError
from rainbow_mantel.rainbow import count_rainbow_triangles, is_rainbow_free


class TestBuildConstruction:
    """Edge counts and rainbow-freeness of the built triple."""

    def test_small_instance_counts(self):
        t = build_construction(ConstructionParams(20, 3))
        assert t.edge_counts() == (94, 94, 99)
        assert count_rainbow_triangles(t) == 0

    def test_layout_of_blocks(self):
        t = build_construction(ConstructionParams(7, 2))
        # A = 0..2, B = 3..4, C = 5..6
        assert t.g1.has_edge(0, 2) and t.g1.has_edge(3, 4)
        assert not t.g1.has_edge(5, 6)
        assert t.g2.has_edge(5, 6) and not t.g2.has_edge(3, 4)
        assert not t.g3.has_edge(0, 1)
        assert t.g3.has_edge(0, 6) and t.g3.has_edge(3, 5)

    @given(st.integers(min_value=3, max_value=40).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(min_value=1, max_value=(n - 1) // 2))
    ))
    def test_always_rainbow_free_and_matches_closed_form(self, case):
        n, block = case
        t = build_construction(ConstructionParams(n, block))
        assert is_rainbow_free(t)
        e12, e3 = predicted_counts(n, Fraction(block, n))
        assert t.edge_counts() == (e12, e12, e3)

    @pytest.mark.parametrize(("n", "block"), [(10, 0), (10, 5), (4, 3), (9, -1)])
    def test_invalid_sizes_rejected(self, n, block):
        with pytest.raises(ValidationError):
            validate_params(ConstructionParams(n, block))


class TestClosedForms:
    """Predicted counts and the balancing root."""

    def test_predicted_counts_small_instance(self):
        assert predicted_counts(20, Fraction(3, 20)) == (94, 99)

    @pytest.mark.parametrize("t", [0, 0.5, Fraction(3, 4), -0.1])
    def test_ratio_outside_open_interval_rejected(self, t):
        with pytest.raises(ValidationError):
            predicted_counts(20, t)

    def test_balancing_root_is_tau(self):
        assert balancing_root() == pytest.approx(Constants.TAU, abs=1e-12)
        t = balancing_root()
        assert 2 - 8 * t + 10 * t * t == pytest.approx(8 * t - 8 * t * t, abs=1e-12)

    def test_tau_value(self):
        assert Constants.TAU == pytest.approx(0.150472, abs=1e-6)
        assert Constants.TAU_SQUARED == pytest.approx(0.022642, abs=1e-6)

    @pytest.mark.parametrize(
        ("n", "block"), [(20, 3), (100, 15), (300, 45), (900, 135)]
    )
    def test_near_tau_block(self, n, block):
        assert near_tau_block(n) == block


class TestDensityReport:
    """How the construction compares with n^2 / 4."""

    def test_beats_quarter_at_900(self):
        params = ConstructionParams(900, 135)
        report = construction_report(params)
        assert report.edges == (207180, 207180, 206415)
        assert report.rainbow_count == 0
        assert report.min_density == pytest.approx(0.25483, abs=1e-5)
        assert report.beats_quarter
        assert beats_quarter(params)

    @pytest.mark.parametrize(("n", "block"), [(20, 3), (900, 45)])
    def test_does_not_beat_quarter(self, n, block):
        assert not beats_quarter(ConstructionParams(n, block))
        assert not construction_report(ConstructionParams(n, block)).beats_quarter

    def test_tightness_sweep_approaches_threshold(self):
        reports = tightness_sweep([100, 300, 900])
        densities = [r.min_density for r in reports]
        assert densities == pytest.approx([0.252, 0.2545, 0.25483], abs=1e-5)
        assert densities == sorted(densities)
        assert all(d < Constants.THRESHOLD for d in densities)

    def test_pair_sum_slack_is_negative_for_rainbow_free(self):
        for n, block in [(20, 3), (100, 15)]:
            assert pair_sum_slack(build_construction(ConstructionParams(n, block))) < 0
