"""Integration tests that verify the CLI works end-to-end."""

import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest


def run_module(*args, timeout=60):
    return subprocess.run(
        [sys.executable, "-m", "rainbow_mantel", *args],
        capture_output=True,
        text=True,
        timeout=timeout,
    )


class TestEndToEnd:
    """Test complete user workflows work."""

    @pytest.mark.smoke
    def test_cli_launches_without_errors(self):
        """CLI starts successfully without import or runtime errors."""
        result = run_module("--help")

        assert result.returncode == 0
        assert "Rainbow Mantel toolkit" in result.stdout

    def test_construct_then_check_round_trip(self, tmp_path: Path):
        """A written construction is read back as rainbow-free with the same edge counts."""
        triple = tmp_path / "construction.txt"

        built = run_module("construct", "--n", "40", "--block", "6", "--out", str(triple))
        assert built.returncode == 0
        report = json.loads(built.stdout)
        assert report["out"] == str(triple)

        checked = run_module("check", str(triple))
        assert checked.returncode == 0
        data = json.loads(checked.stdout)
        assert data["rainbow_count"] == 0
        assert data["edges"] == report["edges"]

    def test_check_finds_planted_rainbow_triangle(self, tmp_path: Path):
        """Adding one rainbow triangle to a clean file is detected with a witness."""
        triple = tmp_path / "planted.txt"
        triple.write_text("n 5\n1 0 1\n2 1 2\n3 0 2\n1 3 4\n")

        result = run_module("check", str(triple))

        assert result.returncode == 0
        data = json.loads(result.stdout)
        assert data["rainbow_count"] == 1
        assert sorted(data["witness"]) == [0, 1, 2]

    def test_search_sweep_produces_valid_json(self):
        """A branch-and-bound sweep returns one exact record per n."""
        result = run_module("search", "--n", "2,3,4", "--mode", "bnb", "--threads", "2")

        assert result.returncode == 0
        data = json.loads(result.stdout)
        assert [r["n"] for r in data["results"]] == [2, 3, 4]
        assert [r["value"] for r in data["results"]] == [1, 2, 4]
        assert data["run"]["threads"] == 2

    def test_verbose_logging_goes_to_stderr(self):
        """--verbose never pollutes the JSON on stdout."""
        result = run_module("-v", "search", "--n", "3", "--mode", "exhaustive")

        assert result.returncode == 0
        assert json.loads(result.stdout)["value"] == 2

    def test_bench_writes_csv(self, tmp_path: Path):
        """bench produces a parseable CSV file."""
        out = tmp_path / "bench.csv"

        result = run_module("bench", "--sizes", "12", "--bnb-sizes", "3", "--out", str(out))

        assert result.returncode == 0
        rows = list(csv.DictReader(out.read_text().splitlines()))
        assert [(r["kind"], r["n"]) for r in rows] == [("count", "12"), ("bnb", "3")]
        assert all(float(r["seconds"]) >= 0 for r in rows)

    def test_unreadable_input_fails_cleanly(self, tmp_path: Path):
        """Bad input exits 2 with a message, not a traceback."""
        result = run_module("check", str(tmp_path / "missing.txt"))

        assert result.returncode == 2
        assert "Traceback" not in result.stderr
